"""Exact coefficients, sparse elements, top reduction, and bounded span oracles.

Elements are finitely supported coefficient combinations of monomials, kept
sorted strictly descending under the declared order, with no zero
coefficients.  All arithmetic is exact: rationals (gmpy2 ``mpq`` when
available, ``fractions.Fraction`` otherwise) or a prime residue field.
Values are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ContractError, StructureError
from .monomials import Monomial, ModuleOrder, MonoidSpec, ZERO, identity

try:
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _ratio = Fraction

__all__ = [
    "RationalField",
    "PrimeField",
    "Context",
    "Element",
    "lm",
    "top_reduce_step",
    "normal_form",
    "normal_form_with_steps",
    "SpanEchelon",
    "bounded_span_pivots",
    "membership_bounded",
]


@dataclass(frozen=True, slots=True)
class RationalField:
    """The field of exact rationals."""

    name = "Q"

    @property
    def zero(self):
        return _ratio(0)

    @property
    def one(self):
        return _ratio(1)

    def from_int(self, n):
        return _ratio(n)

    def from_ratio(self, p, q):
        if q == 0:
            raise StructureError("zero denominator")
        return _ratio(p, q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero coefficient")
        return a / b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def render(self, a):
        return str(a)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, slots=True)
class PrimeField:
    """Residues modulo an odd prime below 2**31."""

    p: int

    def __post_init__(self):
        if self.p < 3 or self.p >= 2**31 or not _is_prime(self.p):
            raise StructureError(f"{self.p} is not an odd prime below 2**31")

    @property
    def name(self):
        return f"GF({self.p})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def from_ratio(self, num, den):
        return self.div(num % self.p, den % self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero coefficient")
        return (a * pow(b, -1, self.p)) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def render(self, a):
        return str(a % self.p)


@dataclass(frozen=True, slots=True)
class Context:
    """Declaration of the ambient monomial module: variables, order, monoid, field."""

    variables: tuple[str, ...]
    order: "ScalarOrder | ModuleOrder"
    monoid: MonoidSpec
    field: "RationalField | PrimeField"

    @property
    def width(self) -> int:
        return len(self.variables)

    @property
    def rank(self) -> int:
        return self.order.rank if isinstance(self.order, ModuleOrder) else 1

    def identity_monomial(self) -> Monomial:
        return identity(self.width)


class Element:
    """Sparse exact element; terms strictly descending under the context order."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms):
        # terms must already be normalized: sorted descending, nonzero coeffs
        self.ctx = ctx
        self.terms = terms

    @classmethod
    def from_terms(cls, ctx: Context, pairs) -> "Element":
        field = ctx.field
        acc = {}
        for m, c in pairs:
            if m.is_zero:
                raise StructureError("the zero monomial cannot carry a coefficient")
            prev = acc.get(m)
            acc[m] = c if prev is None else field.add(prev, c)
        key = ctx.order.key
        terms = tuple(
            (key(m), m, c)
            for m, c in sorted(acc.items(), key=lambda mc: key(mc[0]), reverse=True)
            if not field.is_zero(c)
        )
        return cls(ctx, terms)

    @classmethod
    def zero(cls, ctx: Context) -> "Element":
        return cls(ctx, ())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lm(self) -> Monomial:
        return self.terms[0][1] if self.terms else ZERO

    @property
    def lc(self):
        if not self.terms:
            raise ContractError("the zero element has no leading coefficient")
        return self.terms[0][2]

    @property
    def degree(self) -> int:
        """Max total degree over the support; -1 for the zero element."""
        return max((m.degree for _, m, _ in self.terms), default=-1)

    def coefficient(self, m: Monomial):
        for _, mono, c in self.terms:
            if mono == m:
                return c
        return self.ctx.field.zero

    def monomials(self):
        return [m for _, m, _ in self.terms]

    def scale(self, lam) -> "Element":
        field = self.ctx.field
        if field.is_zero(lam):
            return Element(self.ctx, ())
        return Element(self.ctx, tuple((k, m, field.mul(lam, c)) for k, m, c in self.terms))

    def monic(self) -> "Element":
        if not self.terms:
            return self
        lc = self.terms[0][2]
        field = self.ctx.field
        if lc == field.one:
            return self
        inv = field.div(field.one, lc)
        return self.scale(inv)

    def neg(self) -> "Element":
        field = self.ctx.field
        return Element(self.ctx, tuple((k, m, field.neg(c)) for k, m, c in self.terms))

    def mul_monomial(self, a: Monomial) -> "Element":
        """Left action by an index-free monomial; order is preserved by M2."""
        if a.is_zero:
            raise ContractError("cannot multiply by the zero monomial")
        if a.degree == 0:
            return self
        key = self.ctx.order.key
        out = []
        for _, m, c in self.terms:
            prod = m.mul(a)
            out.append((key(prod), prod, c))
        return Element(self.ctx, tuple(out))

    def sub_scaled(self, other: "Element", lam) -> "Element":
        """self - lam * other, by merge of the sorted term lists."""
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise StructureError("elements from different contexts")
        field = self.ctx.field
        if field.is_zero(lam):
            return self
        a, b = self.terms, other.terms
        out = []
        i = j = 0
        na, nb = len(a), len(b)
        while i < na and j < nb:
            ka, kb = a[i][0], b[j][0]
            if ka > kb:
                out.append(a[i])
                i += 1
            elif ka < kb:
                kj, mj, cj = b[j]
                out.append((kj, mj, field.neg(field.mul(lam, cj))))
                j += 1
            else:
                c = field.sub(a[i][2], field.mul(lam, b[j][2]))
                if not field.is_zero(c):
                    out.append((ka, a[i][1], c))
                i += 1
                j += 1
        out.extend(a[i:])
        for kj, mj, cj in b[j:]:
            out.append((kj, mj, field.neg(field.mul(lam, cj))))
        return Element(self.ctx, tuple(out))

    def add(self, other: "Element") -> "Element":
        return self.sub_scaled(other, self.ctx.field.neg(self.ctx.field.one))

    def sub(self, other: "Element") -> "Element":
        return self.sub_scaled(other, self.ctx.field.one)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.ctx == other.ctx
            and [(m, c) for _, m, c in self.terms] == [(m, c) for _, m, c in other.terms]
        )

    def __hash__(self):
        return hash(tuple((m, c) for _, m, c in self.terms))

    def __repr__(self):
        if not self.terms:
            return "Element(0)"
        parts = [f"{self.ctx.field.render(c)}*{m!r}" for _, m, c in self.terms]
        return "Element(" + " + ".join(parts) + ")"


def lm(f: Element) -> Monomial:
    """Leading monomial; the zero monomial for the zero element."""
    return f.lm


def top_reduce_step(f: Element, e: Element) -> Element:
    """Cancel the leading monomial of f using a reducer with the same lm."""
    if f.is_zero or e.is_zero or f.lm != e.lm:
        raise ContractError("top reduction needs matching nonzero leading monomials")
    lam = f.ctx.field.div(f.lc, e.lc)
    return f.sub_scaled(e, lam)


def normal_form_with_steps(f: Element, admit) -> tuple[Element, int]:
    """Iterate top reduction with reducers supplied by ``admit``.

    ``admit`` maps a nonzero monomial to a reducer element with that leading
    monomial, or None.  Terminates because the leading monomial strictly
    decreases in a well-order.
    """
    steps = 0
    while not f.is_zero:
        e = admit(f.lm)
        if e is None:
            break
        f = top_reduce_step(f, e)
        steps += 1
    return f, steps


def normal_form(f: Element, admit) -> Element:
    return normal_form_with_steps(f, admit)[0]


class SpanEchelon:
    """Exact row echelon form of the linear span of a finite element list.

    Rationals are cleared to integers and eliminated fraction-free with
    content stripping; prime fields are eliminated modulo p.
    """

    def __init__(self, rows, ctx: Context):
        self.ctx = ctx
        self._mod = ctx.field.p if isinstance(ctx.field, PrimeField) else None
        cols = set()
        live = []
        for r in rows:
            if r.is_zero:
                continue
            live.append(r)
            cols.update(r.monomials())
        key = ctx.order.key
        self.columns = sorted(cols, key=key, reverse=True)
        self._col_index = {m: i for i, m in enumerate(self.columns)}
        mat = [self._vectorize(r) for r in live]
        self._rows, self._pivots = self._eliminate(mat)

    def _vectorize(self, f: Element, extra_index=None):
        index = extra_index or self._col_index
        v = [0] * len(index)
        if self._mod is None:
            den = 1
            for _, m, c in f.terms:
                den = den * c.denominator // gcd(den, c.denominator)
            for _, m, c in f.terms:
                v[index[m]] = int(c.numerator) * (den // int(c.denominator))
        else:
            for _, m, c in f.terms:
                v[index[m]] = c % self._mod
        return v

    def _strip_content(self, v):
        g = 0
        for x in v:
            if x:
                g = gcd(g, abs(x))
                if g == 1:
                    return v
        if g > 1:
            return [x // g for x in v]
        return v

    def _eliminate(self, mat):
        ncols = len(self.columns)
        echelon = []
        pivots = []
        r = 0
        for c in range(ncols):
            pivot_row = None
            for i in range(r, len(mat)):
                if mat[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
            prow = mat[r]
            if self._mod is not None:
                inv = pow(prow[c], -1, self._mod)
                prow = [(x * inv) % self._mod for x in prow]
                mat[r] = prow
            for i in range(r + 1, len(mat)):
                if mat[i][c]:
                    mat[i] = self._combine(mat[i], prow, c)
            echelon.append(prow)
            pivots.append(c)
            r += 1
            if r == len(mat):
                break
        return echelon, pivots

    def _combine(self, row, prow, c):
        if self._mod is not None:
            f = row[c]
            return [(x - f * y) % self._mod for x, y in zip(row, prow)]
        a, b = prow[c], row[c]
        return self._strip_content([a * x - b * y for x, y in zip(row, prow)])

    def pivot_monomials(self):
        return [self.columns[c] for c in self._pivots]

    def residue_vector(self, f: Element):
        """Reduce f against the echelon; exact up to a nonzero scalar."""
        outside = [m for m in f.monomials() if m not in self._col_index]
        v = self._vectorize(
            Element.from_terms(
                self.ctx, [(m, c) for _, m, c in f.terms if m in self._col_index]
            )
        )
        for prow, c in zip(self._rows, self._pivots):
            if v[c]:
                v = self._combine(v, prow, c)
        return v, outside

    def contains(self, f: Element) -> bool:
        if f.is_zero:
            return True
        v, outside = self.residue_vector(f)
        return not outside and not any(v)

    def residue(self, f: Element) -> Element:
        """A representative of f modulo the span (scaled by a nonzero constant)."""
        if f.is_zero:
            return f
        v, outside = self.residue_vector(f)
        field = self.ctx.field
        pairs = [(m, f.coefficient(m)) for m in outside]
        for m, x in zip(self.columns, v):
            if x:
                pairs.append((m, field.from_int(x)))
        return Element.from_terms(self.ctx, pairs)


def _monoid_products(gens, D: int, spec: MonoidSpec):
    rows = []
    for g in gens:
        if g.is_zero:
            continue
        budget = D - g.degree
        if budget < 0:
            continue
        width = g.ctx.width
        for a in spec.elements_up_to(width, budget):
            rows.append(g.mul_monomial(Monomial(a)))
    return rows


def bounded_span_pivots(gens, D: int, spec: MonoidSpec):
    """Pivot monomials of the degree <= D slice spanned by monoid multiples."""
    gens = list(gens)
    if not gens:
        return set()
    top = max(g.degree for g in gens)
    if D < top:
        raise ContractError(f"degree bound {D} below max generator degree {top}")
    ctx = gens[0].ctx
    ech = SpanEchelon(_monoid_products(gens, D, spec), ctx)
    return set(ech.pivot_monomials())


def membership_bounded(f: Element, gens, D: int, spec: MonoidSpec) -> bool:
    """Exact test: f in the span of all monoid multiples of gens of degree <= D."""
    if f.is_zero:
        return True
    if f.degree > D:
        raise ContractError("element degree exceeds the bound")
    gens = list(gens)
    if not gens:
        return False
    ech = SpanEchelon(_monoid_products(gens, D, spec), f.ctx)
    return ech.contains(f)
