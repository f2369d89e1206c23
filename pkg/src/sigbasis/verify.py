"""Independent ground truth: a classical completion oracle and bounded checks.

The oracle is deliberately naive: one S-pair per minimal common multiple,
popped by smallest common-multiple degree, fully reduced, no pair-elimination
shortcuts.  Its reduced output is unique, which makes it a stable fixture
source for comparing engine runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush

from .algebra import Element, SpanEchelon
from .errors import ContractError, LimitExceeded
from .monomials import Monomial, divide, minimal_common_multiples
from .sigcore import SigSet

__all__ = [
    "GroebnerBasis",
    "buchberger",
    "is_groebner_basis",
    "lm_ideal_equal",
    "bounded_signature_basis_check",
    "bounded_syzygy_check",
    "prebasis_spotcheck_P2",
]


@dataclass(frozen=True, slots=True)
class GroebnerBasis:
    elements: tuple[Element, ...]
    reduced: bool = True

    def lm_set(self):
        return {g.lm for g in self.elements}

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _full_reduce(f: Element, reducers, spec) -> Element:
    """Divide every term of f by the reducer list (not only the top)."""
    ctx = f.ctx
    out = []
    while not f.is_zero:
        target = f.lm
        hit = None
        for g in reducers:
            if g.is_zero:
                continue
            b = divide(g.lm, target, spec)
            if b is not None:
                hit = g.mul_monomial(b)
                break
        if hit is None:
            out.append((target, f.lc))
            f = Element(ctx, f.terms[1:])
        else:
            lam = ctx.field.div(f.lc, hit.lc)
            f = f.sub_scaled(hit, lam)
    return Element.from_terms(ctx, out)


def _spair(f: Element, g: Element, a: Monomial, b: Monomial) -> Element:
    fa = f.mul_monomial(a)
    gb = g.mul_monomial(b)
    lam = f.ctx.field.div(fa.lc, gb.lc)
    return fa.sub_scaled(gb, lam)


def _pair_multiples(f: Element, g: Element, spec):
    res = minimal_common_multiples(f.lm, g.lm, spec)
    if not res.complete:
        raise ContractError("S-pair multiplier search could not be certified complete")
    return res.pairs


def buchberger(gens, spec, max_insertions: int = 100_000) -> GroebnerBasis:
    """Reduced Groebner basis by classical completion."""
    basis = [g.monic() for g in gens if not g.is_zero]
    if not basis:
        return GroebnerBasis((), reduced=True)
    pairs = []
    counter = 0

    def push_pairs(i):
        nonlocal counter
        for j in range(i):
            for a, b in _pair_multiples(basis[i], basis[j], spec):
                counter += 1
                heappush(pairs, (a.degree + basis[i].lm.degree, counter, i, j, a, b))

    for i in range(len(basis)):
        push_pairs(i)
    inserted = 0
    while pairs:
        _, _, i, j, a, b = heappop(pairs)
        s = _spair(basis[i], basis[j], a, b)
        r = _full_reduce(s, basis, spec)
        if r.is_zero:
            continue
        basis.append(r.monic())
        inserted += 1
        if inserted > max_insertions:
            raise LimitExceeded("oracle insertion cap exceeded")
        push_pairs(len(basis) - 1)
    return GroebnerBasis(tuple(_interreduce(basis, spec)), reduced=True)


def _interreduce(basis, spec):
    """Drop members with divisible leading monomials, then tail-reduce.

    Scanning by ascending leading monomial is complete: a divisor's leading
    monomial is never larger than the multiple's.
    """
    basis = [g.monic() for g in basis if not g.is_zero]
    if not basis:
        return []
    key = basis[0].ctx.order.key
    basis.sort(key=lambda e: (key(e.lm), len(e.terms)))
    minimal = []
    for g in basis:
        if any(divide(h.lm, g.lm, spec) is not None for h in minimal):
            continue
        minimal.append(g)
    out = [
        _full_reduce(g, [h for h in minimal if h is not g], spec).monic()
        for g in minimal
    ]
    out.sort(key=lambda e: key(e.lm))
    return out


def interreduce_for_display(parts, spec):
    """Tail-reduced, minimal, monic copy of a part list.

    Display helper only: the result is a plain reduced Groebner basis and no
    longer carries any signature semantics.
    """
    return tuple(_interreduce([p for p in parts if not p.is_zero], spec))


def is_groebner_basis(elems, spec) -> bool:
    """Closure check: every S-pair reduces to zero over the set itself."""
    elems = [e for e in elems if not e.is_zero]
    for i in range(len(elems)):
        for j in range(i):
            for a, b in _pair_multiples(elems[i], elems[j], spec):
                s = _spair(elems[i], elems[j], a, b)
                if not _full_reduce(s, elems, spec).is_zero:
                    return False
    return True


def lm_ideal_equal(A, B, spec) -> bool:
    """Mutual divisibility of two finite leading-monomial sets."""
    A, B = set(A), set(B)
    return all(any(divide(b, a, spec) is not None for b in B) for a in A) and all(
        any(divide(a, b, spec) is not None for a in A) for b in B
    )


@dataclass(slots=True)
class CheckReport:
    ok: bool
    violations: list
    details: tuple = ()

    def __bool__(self):
        return self.ok


def _signature_slice_rows(G: SigSet, sigma_key, D: int):
    """Products a*g with shifted signature <= sigma and part degree <= D."""
    spec = G.monoid
    skey = G.sig_order.key
    rows = []
    for g in G.members:
        if g.part.is_zero:
            continue
        budget = D - g.part.degree
        if budget < 0:
            continue
        for a in spec.elements_up_to(len(g.sig.exps), budget):
            am = Monomial(a)
            if skey(g.sig.mul(am)) <= sigma_key:
                rows.append(g.part.mul_monomial(am))
    return rows


def bounded_signature_basis_check(
    G: SigSet, D: int, max_signatures: int = 4000
) -> CheckReport:
    """Echelon-pivot check of every signature slice up to degree D.

    For each reachable signature, each pivot of the slice spanned by the
    admissible products must be the leading monomial of one of those
    products; a pivot that no admissible product reaches is a violation.
    """
    top = max((g.part.degree for g in G.members if not g.part.is_zero), default=0)
    if D < top:
        raise ContractError(f"degree bound {D} below max part degree {top}")
    spec = G.monoid
    skey = G.sig_order.key
    sigmas = {}
    for g in G.members:
        budget = D - g.sig.degree
        for a in spec.elements_up_to(len(g.sig.exps), max(budget, 0)):
            s = g.sig.mul(Monomial(a))
            sigmas[s] = skey(s)
    if len(sigmas) > max_signatures:
        raise ContractError(
            f"{len(sigmas)} signatures exceed the cap {max_signatures}"
        )
    violations = []
    for sigma, sigma_key in sorted(sigmas.items(), key=lambda kv: kv[1]):
        rows = _signature_slice_rows(G, sigma_key, D)
        if not rows:
            continue
        ech = SpanEchelon(rows, G.ctx)
        reachable = {r.lm for r in rows}
        for pivot in ech.pivot_monomials():
            if pivot not in reachable:
                violations.append((sigma, pivot))
    return CheckReport(not violations, violations)


def bounded_syzygy_check(input_gens, result, D: int) -> CheckReport:
    """Kernel cover check for a shifted-prebasis run.

    Computes, degree by degree, the leading monomials of the kernel of
    (c_1, ..., c_r) -> sum c_i g_i under the shifted signature order, and
    requires each to be divisible by a reported syzygy signature.
    """
    gens = [g.monic() for g in input_gens]
    if result.basis.origin != "shifted":
        raise ContractError("syzygy cover check needs a shifted-prebasis run")
    ctx = gens[0].ctx
    spec = ctx.monoid
    skey = result.basis.sig_order.key
    entries = []
    for i, g in enumerate(gens, start=1):
        budget = D - g.lm.degree
        for a in spec.elements_up_to(ctx.width, max(budget, 0)):
            am = Monomial(a)
            shifted = g.lm.mul(am).with_slot(i)
            entries.append((skey(shifted), shifted, am, g))
    entries.sort(key=lambda e: e[0])
    kernel_lms = []
    pivots = {}
    for _, shifted, am, g in entries:
        v = g.mul_monomial(am)
        while not v.is_zero:
            head = v.lm
            pivot = pivots.get(head)
            if pivot is None:
                pivots[head] = v
                break
            v = v.sub_scaled(pivot, ctx.field.div(v.lc, pivot.lc))
        if v.is_zero:
            kernel_lms.append(shifted)
    syz = result.syzygies
    violations = [
        s
        for s in kernel_lms
        if not any(divide(t, s, spec) is not None for t in syz)
    ]
    return CheckReport(not violations, violations, details=tuple(kernel_lms))


def prebasis_spotcheck_P2(G: SigSet, sigma: Monomial, D: int) -> bool:
    """Substitutability probe at one signature.

    Takes the first two distinct realizations of sigma, reduces both against
    the span of the strictly-smaller slice, and reports whether some nonzero
    scalar makes the difference land in that span.  Vacuously true when the
    signature has fewer than two realizations.
    """
    spec = G.monoid
    skey = G.sig_order.key
    sigma_key = skey(sigma)
    realizations = []
    for g in G.members:
        a = divide(g.sig, sigma, spec)
        if a is not None:
            realizations.append(g.part.mul_monomial(a) if a.degree else g.part)
        if len(realizations) == 2:
            break
    if len(realizations) < 2:
        return True
    f, g = realizations
    rows = []
    for m in G.members:
        if m.part.is_zero:
            continue
        budget = D - m.part.degree
        if budget < 0:
            continue
        for a in spec.elements_up_to(len(sigma.exps), budget):
            am = Monomial(a)
            if skey(m.sig.mul(am)) < sigma_key:
                rows.append(m.part.mul_monomial(am))
    ech = SpanEchelon(rows, G.ctx)
    rf = ech.residue(f)
    rg = ech.residue(g)
    if rf.is_zero and rg.is_zero:
        return True
    if rf.is_zero or rg.is_zero:
        return False
    if rf.lm != rg.lm:
        return False
    lam = G.ctx.field.div(rf.lc, rg.lc)
    return rf.sub_scaled(rg, lam).is_zero
