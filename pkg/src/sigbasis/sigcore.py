"""Sigpairs, prebasis constructors, regular reduction, domination, classification.

A sigpair couples a polynomial part with a signature monomial.  Regular
reduction only admits reducers whose shifted signature stays strictly below
the signature being worked at; this is the constraint that distinguishes the
signature world from plain top reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Context, Element, normal_form_with_steps
from .errors import ContractError, StructureError
from .monomials import Monomial, ModuleOrder, ScalarOrder, divide

__all__ = [
    "SigPair",
    "SigSet",
    "multiply",
    "make_prebasis_shifted",
    "make_prebasis_unshifted",
    "make_prebasis_sum",
    "find_regular_reducer",
    "regular_normal_form",
    "regular_normal_form_with_steps",
    "dominates",
    "classify_signature",
    "syzygy_signatures",
]


@dataclass(frozen=True, slots=True)
class SigPair:
    """(polynomial part, signature monomial, provenance id)."""

    part: Element
    sig: Monomial
    id: int

    def __post_init__(self):
        if self.sig.is_zero:
            raise StructureError("a sigpair signature is never the zero monomial")


class SigSet:
    """Ordered, append-only collection of sigpairs with shared orders.

    ``certified`` is set by the engine once the combinatorial rewrite-basis
    certificate has passed; classification requires it.
    """

    def __init__(self, ctx: Context, sig_order: ModuleOrder, members=(), origin="adhoc"):
        self.ctx = ctx
        self.sig_order = sig_order
        self.members: list[SigPair] = []
        self.origin = origin
        self.certified = False
        self._ids = set()
        for m in members:
            self.add(m)

    @property
    def monoid(self):
        return self.ctx.monoid

    def add(self, sp: SigPair):
        if sp.id in self._ids:
            raise StructureError(f"duplicate sigpair id {sp.id}")
        self._ids.add(sp.id)
        self.members.append(sp)

    def member_by_id(self, i: int) -> SigPair:
        for sp in self.members:
            if sp.id == i:
                return sp
        raise KeyError(i)

    def next_id(self) -> int:
        return max(self._ids, default=0) + 1

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def copy(self) -> "SigSet":
        out = SigSet(self.ctx, self.sig_order, self.members, origin=self.origin)
        out.certified = self.certified
        return out


def multiply(a: Monomial, f: SigPair) -> SigPair:
    """Act on both components by an index-free monoid element."""
    if a.degree == 0 and not a.is_zero:
        return f
    return SigPair(f.part.mul_monomial(a), f.sig.mul(a), f.id)


def _sig_module_order(ctx: Context, rank: int, sig_kind: str) -> ModuleOrder:
    return ModuleOrder(ctx.order, sig_kind, max(rank, 1))


def _checked_gens(gens):
    gens = list(gens)
    for g in gens:
        if g.is_zero:
            raise StructureError("prebasis constructors reject zero generators")
    return gens


def make_prebasis_shifted(gens, sig_kind: str = "top") -> SigSet:
    """Signatures are the generator leading monomials, one slot each.

    Distinct slots make at most one member signature divide any given
    signature with a unique quotient, which is the structural reason this
    sigset is a valid engine input.
    """
    gens = _checked_gens(gens)
    if not gens:
        return _empty_sigset(sig_kind)
    ctx = gens[0].ctx
    order = _sig_module_order(ctx, len(gens), sig_kind)
    members = [
        SigPair(g.monic(), g.lm.with_slot(i), i)
        for i, g in enumerate(gens, start=1)
    ]
    return SigSet(ctx, order, members, origin="shifted")


def make_prebasis_unshifted(gens, sig_kind: str = "top") -> SigSet:
    """Signatures are 1 in each slot; needs an identity monomial in the part module."""
    gens = _checked_gens(gens)
    if not gens:
        return _empty_sigset(sig_kind)
    ctx = gens[0].ctx
    if not isinstance(ctx.order, ScalarOrder):
        raise StructureError("unshifted signatures need an identity part monomial")
    order = _sig_module_order(ctx, len(gens), sig_kind)
    one = ctx.identity_monomial()
    members = [
        SigPair(g.monic(), one.with_slot(i), i) for i, g in enumerate(gens, start=1)
    ]
    return SigSet(ctx, order, members, origin="unshifted")


def make_prebasis_sum(gens_a, gens_b, sig_kind: str = "top", check: bool = False) -> SigSet:
    """Rank-2 signatures for the sum of two submodules.

    Both inputs must already be Groebner bases (caller-asserted; pass
    ``check=True`` to verify with the oracle).
    """
    gens_a, gens_b = _checked_gens(gens_a), _checked_gens(gens_b)
    if check:
        from .verify import is_groebner_basis

        for side, gens in (("first", gens_a), ("second", gens_b)):
            if gens and not is_groebner_basis(gens, gens[0].ctx.monoid):
                raise ContractError(f"the {side} generator set is not a Groebner basis")
    if not gens_a and not gens_b:
        return _empty_sigset(sig_kind)
    ctx = (gens_a or gens_b)[0].ctx
    order = _sig_module_order(ctx, 2, sig_kind)
    members = []
    for g in gens_a:
        members.append(SigPair(g.monic(), g.lm.with_slot(1), len(members) + 1))
    for h in gens_b:
        members.append(SigPair(h.monic(), h.lm.with_slot(2), len(members) + 1))
    return SigSet(ctx, order, members, origin="sum")


def _empty_sigset(sig_kind: str) -> SigSet:
    # Rank and context are unknowable without generators; a width-0 ring
    # context keeps the empty sigset usable by the engine (zero iterations).
    from .algebra import RationalField
    from .monomials import MonoidSpec

    ctx = Context((), ScalarOrder("degrevlex", ()), MonoidSpec.full(), RationalField())
    return SigSet(ctx, ModuleOrder(ctx.order, sig_kind, 1), (), origin="empty")


def find_regular_reducer(target_lm: Monomial, sigma: Monomial, G: SigSet, _sigma_key=None):
    """Smallest-signature reducer admissible strictly below ``sigma``.

    Returns ``(member, multiplier)`` with ``multiplier * lm(member part) ==
    target_lm`` and ``multiplier * sig(member) < sigma``, or None.  Ties on
    the shifted signature break toward the smallest provenance id.
    """
    if target_lm.is_zero:
        raise ContractError("no reducer for the zero monomial")
    spec = G.monoid
    skey = G.sig_order.key
    sigma_key = _sigma_key if _sigma_key is not None else skey(sigma)
    best = None
    for g in G.members:
        part = g.part
        if not part.terms:
            continue
        b = divide(part.lm, target_lm, spec)
        if b is None:
            continue
        cand_key = (skey(g.sig.mul(b)), g.id)
        if cand_key[0] >= sigma_key:
            continue
        if best is None or cand_key < best[0]:
            best = (cand_key, g, b)
    if best is None:
        return None
    return best[1], best[2]


def regular_normal_form_with_steps(f: SigPair, G: SigSet):
    """Reduce the part at fixed signature until no admissible reducer remains."""
    sigma = f.sig
    sigma_key = G.sig_order.key(sigma)

    def admit(mono):
        found = find_regular_reducer(mono, sigma, G, _sigma_key=sigma_key)
        if found is None:
            return None
        g, b = found
        return g.part.mul_monomial(b)

    part, steps = normal_form_with_steps(f.part, admit)
    return SigPair(part.monic(), sigma, f.id), steps


def regular_normal_form(f: SigPair, G: SigSet) -> SigPair:
    return regular_normal_form_with_steps(f, G)[0]


def dominates(g: SigPair, f: SigPair, sig_order: ModuleOrder) -> bool:
    """Redundancy relation: g can stand in for f.

    Either some multiple of g matches f's signature with leading monomial at
    most f's, or some multiple matches f's leading monomial at strictly
    smaller signature.
    """
    spec = g.part.ctx.monoid
    part_key = g.part.ctx.order.key
    skey = sig_order.key
    a = divide(g.sig, f.sig, spec)
    if a is not None:
        glm = g.part.lm
        shifted = glm if glm.is_zero else glm.mul(a)
        if part_key(shifted) <= part_key(f.part.lm):
            return True
    if not g.part.is_zero and not f.part.is_zero:
        a = divide(g.part.lm, f.part.lm, spec)
        if a is not None and skey(g.sig.mul(a)) < skey(f.sig):
            return True
    return False


def dominated_members(G: SigSet) -> list[int]:
    """Ids of members strictly dominated by some other member."""
    out = []
    for f in G.members:
        for g in G.members:
            if g.id == f.id:
                continue
            if dominates(g, f, G.sig_order) and not dominates(f, g, G.sig_order):
                out.append(f.id)
                break
    return out


def classify_signature(sigma: Monomial, G: SigSet) -> str:
    """Classify as 'empty', 'regular', or 'syzygy' relative to a certified basis."""
    if not G.certified:
        raise ContractError("classification is only valid on a certified rewrite basis")
    spec = G.monoid
    nonempty = False
    for g in G.members:
        if divide(g.sig, sigma, spec) is None:
            continue
        if g.part.is_zero:
            return "syzygy"
        nonempty = True
    return "regular" if nonempty else "empty"


def syzygy_signatures(G: SigSet) -> set[Monomial]:
    """Signatures of the zero-part members: the recorded syzygy markers."""
    return {g.sig for g in G.members if g.part.is_zero}
