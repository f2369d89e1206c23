"""Monomials, total orders, the monoid action, and minimal common multiples.

A monomial is an exponent vector over a declared variable list, optionally
decorated with a stack of module positions (``indices``).  A plain ring
monomial has no indices; a free-module monomial carries one; a signature
monomial built over a free module carries two (inner module slot, then
signature slot).  The distinguished zero monomial compares strictly below
everything and is the leading monomial of the zero element.

Monomial multipliers act from the left by exponent addition and never touch
indices.  Divisibility is decided relative to a monoid of admissible
multipliers (``MonoidSpec``): the quotient exponent vector must itself be a
monoid member.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError, StructureError

__all__ = [
    "Monomial",
    "ZERO",
    "ScalarOrder",
    "ModuleOrder",
    "MonoidSpec",
    "MCMResult",
    "compare",
    "divide",
    "divides_exponentwise",
    "monoid_member",
    "minimal_common_multiples",
]


@dataclass(frozen=True, slots=True)
class Monomial:
    """Exponent vector plus an optional stack of module positions."""

    exps: tuple[int, ...]
    indices: tuple[int, ...] = ()
    is_zero: bool = False

    def __post_init__(self):
        if not self.is_zero and any(e < 0 for e in self.exps):
            raise StructureError(f"negative exponent in {self.exps}")
        if any(i < 1 for i in self.indices):
            raise StructureError(f"module indices must be >= 1, got {self.indices}")

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def index(self):
        """Outermost module position, or None for an index-free monomial."""
        return self.indices[-1] if self.indices else None

    def mul(self, a: "Monomial") -> "Monomial":
        """Left action of the index-free multiplier ``a``."""
        if self.is_zero:
            return self
        if a.indices or a.is_zero:
            raise StructureError("multiplier must be a nonzero index-free monomial")
        if len(a.exps) != len(self.exps):
            raise StructureError("multiplier width mismatch")
        return Monomial(tuple(x + y for x, y in zip(a.exps, self.exps)), self.indices)

    def with_slot(self, i: int) -> "Monomial":
        """Append a module position (used to form signature monomials)."""
        if self.is_zero:
            raise ContractError("the zero monomial takes no module position")
        return Monomial(self.exps, self.indices + (i,))

    def drop_slot(self) -> "Monomial":
        if not self.indices:
            raise ContractError("no module position to drop")
        return Monomial(self.exps, self.indices[:-1])

    def __repr__(self):
        if self.is_zero:
            return "Monomial(0)"
        tail = "".join(f"*e_{i}" for i in self.indices)
        return f"Monomial({self.exps}{tail})"


ZERO = Monomial((), (), True)


def identity(width: int) -> Monomial:
    return Monomial((0,) * width)


_KEY_ZERO = (0,)


@dataclass(frozen=True, slots=True)
class ScalarOrder:
    """Total order on index-free monomials.

    ``variables`` lists the variable names from smallest to largest; exponent
    vectors are stored in that same sequence.  ``degrevlex`` compares total
    degree first, then breaks ties scanning from the smallest variable, a
    strictly larger exponent there making the monomial smaller.  ``lex``
    compares from the largest variable down.
    """

    kind: str
    variables: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex"):
            raise StructureError(f"unknown scalar order kind {self.kind!r}")

    @property
    def width(self) -> int:
        return len(self.variables)

    def key(self, m: Monomial):
        if m.is_zero:
            return _KEY_ZERO
        if m.indices:
            raise StructureError("scalar order applied to an indexed monomial")
        if len(m.exps) != self.width:
            raise StructureError(
                f"monomial width {len(m.exps)} does not match {self.width} variables"
            )
        if self.kind == "degrevlex":
            return (1, sum(m.exps), tuple(-e for e in m.exps))
        return (1, tuple(reversed(m.exps)))


@dataclass(frozen=True, slots=True)
class ModuleOrder:
    """POT or TOP extension of a base order to indexed monomials."""

    base: "ScalarOrder | ModuleOrder"
    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in ("pot", "top"):
            raise StructureError(f"unknown module order kind {self.kind!r}")
        if self.rank < 1:
            raise StructureError("module rank must be positive")

    @property
    def width(self) -> int:
        return self.base.width

    @property
    def variables(self) -> tuple[str, ...]:
        return self.base.variables

    def key(self, m: Monomial):
        if m.is_zero:
            return _KEY_ZERO
        if not m.indices:
            raise StructureError("module order applied to an index-free monomial")
        i = m.indices[-1]
        if not 1 <= i <= self.rank:
            raise StructureError(f"module position {i} outside 1..{self.rank}")
        inner = Monomial(m.exps, m.indices[:-1])
        if self.kind == "pot":
            return (1, i, self.base.key(inner))
        return (1, self.base.key(inner), i)


def compare(m: Monomial, n: Monomial, order) -> int:
    """Three-way comparison under ``order``; the zero monomial is minimal."""
    a, b = order.key(m), order.key(n)
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


class MonoidSpec:
    """The monoid of admissible multipliers inside the full monomial lattice.

    Three kinds are supported:

    * ``full`` -- every exponent vector;
    * ``degree_truncated`` -- the identity plus every monomial of total
      degree >= ``min_degree``, minus an explicit finite exclusion list;
    * ``generated`` -- all products of a finite generator list, membership
      decided by memoized descent over the generators.
    """

    __slots__ = ("kind", "min_degree", "exclusions", "generators", "_member_cache")

    def __init__(self, kind, min_degree=0, exclusions=(), generators=()):
        self.kind = kind
        self.min_degree = min_degree
        self.exclusions = frozenset(exclusions)
        self.generators = tuple(generators)
        self._member_cache = {}
        if kind == "degree_truncated":
            self._validate_truncated()
        elif kind == "generated":
            if not self.generators:
                raise StructureError("generated monoid needs at least one generator")
            if any(sum(g) == 0 for g in self.generators):
                raise StructureError("the identity is implicit, not a generator")
        elif kind != "full":
            raise StructureError(f"unknown monoid kind {kind!r}")

    @classmethod
    def full(cls) -> "MonoidSpec":
        return cls("full")

    @classmethod
    def degree_truncated(cls, min_degree, exclusions=()) -> "MonoidSpec":
        excl = tuple(tuple(e) for e in exclusions)
        return cls("degree_truncated", min_degree=min_degree, exclusions=excl)

    @classmethod
    def generated(cls, generators) -> "MonoidSpec":
        gens = tuple(tuple(g) for g in generators)
        return cls("generated", generators=gens)

    def _validate_truncated(self):
        d = self.min_degree
        if d < 0:
            raise StructureError("min_degree must be nonnegative")
        for e in self.exclusions:
            if sum(e) < d:
                raise StructureError(
                    f"exclusion {e} already lies below the degree threshold"
                )
        if not self.exclusions:
            return
        # Members must stay multiplicatively closed: a product of two
        # non-identity members can only land in the (finite) exclusion set,
        # so it suffices to scan member pairs up to the largest excluded degree.
        width = len(next(iter(self.exclusions)))
        top = max(sum(e) for e in self.exclusions)
        members = [
            v
            for k in range(d, top - d + 1)
            for v in _vectors_of_degree(width, k)
            if v not in self.exclusions
        ]
        for u in members:
            for v in members:
                s = tuple(x + y for x, y in zip(u, v))
                if s in self.exclusions:
                    raise StructureError(
                        f"exclusions are not closed: member product {s} is excluded"
                    )

    def member(self, exps: tuple[int, ...]) -> bool:
        if self.kind == "full":
            return True
        if self.kind == "degree_truncated":
            d = sum(exps)
            if d == 0:
                return True
            return d >= self.min_degree and exps not in self.exclusions
        cached = self._member_cache.get(exps)
        if cached is not None:
            return cached
        result = self._member_generated(exps)
        self._member_cache[exps] = result
        return result

    def _member_generated(self, exps) -> bool:
        if sum(exps) == 0:
            return True
        for g in self.generators:
            if len(g) != len(exps):
                raise StructureError("generator width mismatch")
            rest = tuple(x - y for x, y in zip(exps, g))
            if all(e >= 0 for e in rest) and self.member(rest):
                return True
        return False

    def elements_up_to(self, width: int, max_degree: int):
        """All members of total degree <= max_degree, ascending by degree."""
        out = []
        for k in range(max_degree + 1):
            for v in _vectors_of_degree(width, k):
                if self.member(v):
                    out.append(v)
        return out

    def __repr__(self):
        if self.kind == "full":
            return "MonoidSpec.full()"
        if self.kind == "degree_truncated":
            return f"MonoidSpec.degree_truncated({self.min_degree}, {sorted(self.exclusions)})"
        return f"MonoidSpec.generated({list(self.generators)})"

    def __eq__(self, other):
        return (
            isinstance(other, MonoidSpec)
            and self.kind == other.kind
            and self.min_degree == other.min_degree
            and self.exclusions == other.exclusions
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.kind, self.min_degree, self.exclusions, self.generators))


def _vectors_of_degree(width: int, degree: int):
    """Exponent vectors of the given total degree, in a fixed deterministic order."""
    if width == 0:
        if degree == 0:
            yield ()
        return
    if width == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for tail in _vectors_of_degree(width - 1, degree - head):
            yield (head,) + tail


def monoid_member(m: Monomial, spec: MonoidSpec) -> bool:
    """Membership of an index-free monomial in the multiplier monoid."""
    if m.is_zero:
        return False
    if m.indices:
        raise StructureError("monoid membership is defined for index-free monomials")
    return spec.member(m.exps)


def divide(m: Monomial, n: Monomial, spec: MonoidSpec):
    """Quotient ``a`` with ``a * m == n`` and ``a`` a monoid member, else None."""
    if m.is_zero:
        raise ContractError("cannot divide by the zero monomial")
    if n.is_zero:
        return None
    if m.indices != n.indices:
        return None
    if len(m.exps) != len(n.exps):
        raise StructureError("width mismatch in divide")
    diff = tuple(x - y for x, y in zip(n.exps, m.exps))
    if any(e < 0 for e in diff):
        return None
    if not spec.member(diff):
        return None
    return Monomial(diff)


def divides_exponentwise(m: Monomial, n: Monomial) -> bool:
    """True when ``n - m`` is nonnegative with equal indices.

    This is the partial order used for minimality filters; the quotient is
    not required to be a monoid member.
    """
    if m.is_zero or n.is_zero:
        return m.is_zero and n.is_zero
    if m.indices != n.indices:
        return False
    return all(x <= y for x, y in zip(m.exps, n.exps))


@dataclass(frozen=True, slots=True)
class MCMResult:
    """Minimal multiplier pairs ``(a, b)`` with ``a*m == b*n``.

    ``complete`` is False when the bounded search over a generated monoid
    could not certify that every solution sits above a reported pair.
    """

    pairs: tuple[tuple[Monomial, Monomial], ...]
    complete: bool = True

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __bool__(self):
        return bool(self.pairs)


def minimal_common_multiples(m: Monomial, n: Monomial, spec: MonoidSpec) -> MCMResult:
    """Pairs ``(a, b)`` with ``a*m == b*n``, minimal in the multiplier ``a``.

    Minimality is exponentwise.  In the full monoid (and for equal-index
    module monomials) this is the single lcm pair; differing indices give the
    empty set; restricted monoids are searched degree by degree.
    """
    if m.is_zero or n.is_zero:
        raise ContractError("minimal common multiples need nonzero monomials")
    if m.indices != n.indices:
        return MCMResult(())
    width = len(m.exps)
    lcm = tuple(max(x, y) for x, y in zip(m.exps, n.exps))
    a0 = tuple(x - y for x, y in zip(lcm, m.exps))
    if spec.kind == "full":
        b0 = tuple(x - y for x, y in zip(lcm, n.exps))
        return MCMResult(((Monomial(a0), Monomial(b0)),))
    if spec.kind == "degree_truncated":
        bound = _truncated_search_bound(m, n, a0, spec)
        pairs = _collect_mcm(m, n, a0, spec, bound - sum(a0))
        return MCMResult(tuple(pairs), complete=True)
    gen_top = max(sum(g) for g in spec.generators)
    bound = m.degree + n.degree + gen_top
    pairs = _collect_mcm(m, n, a0, spec, max(0, bound - sum(a0)))
    complete = _certify_generated(m, n, [a for a, _ in pairs], spec)
    return MCMResult(tuple(pairs), complete=complete)


def _truncated_search_bound(m, n, a0, spec) -> int:
    # Beyond this total degree every solution factors through a smaller one,
    # so the exponentwise-minimal set is fully contained in the search box.
    d = spec.min_degree
    excl_top = max((sum(e) for e in spec.exclusions), default=0)
    non_member_top = max(d - 1, excl_top)
    e1 = non_member_top + max(0, n.degree - m.degree)
    step = max(d, excl_top + 1, 1)
    return max(e1, sum(a0)) + step


def _collect_mcm(m, n, a0, spec, extra_degree):
    found = []
    for k in range(extra_degree + 1):
        for t in _vectors_of_degree(len(a0), k):
            a = tuple(x + y for x, y in zip(a0, t))
            if not spec.member(a):
                continue
            cof = tuple(x + y - z for x, y, z in zip(a, m.exps, n.exps))
            if not spec.member(cof):
                continue
            if any(all(x <= y for x, y in zip(prev.exps, a)) for prev, _ in found):
                continue
            found.append((Monomial(a), Monomial(cof)))
    return found


def _certify_generated(m, n, minimal, spec) -> bool:
    # Every generator step away from a reported multiplier must stay inside
    # the upward closure of the reported set.
    for a in minimal:
        for g in spec.generators:
            s = tuple(x + y for x, y in zip(a.exps, g))
            if not any(
                all(x <= y for x, y in zip(prev.exps, s)) for prev in minimal
            ):
                return False
    return True
