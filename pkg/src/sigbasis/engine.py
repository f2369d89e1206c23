"""Rewrite-basis main loops, sigtrees, the combinatorial certificate, exports.

One queue-driven skeleton realizes every strategy: signatures are popped from
the pending queue (smallest first, or a batch), a reductant is selected per
strategy, regular-reduced, and the result inserted with provenance recorded
in a forest of reduction ancestry (the sigtree).  Termination rests on the
well-formedness of that forest; the invariant can be asserted at loop heads
in debug runs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .algebra import normal_form_with_steps
from .critical import CriticalQueue, critical_set, queue_update
from .errors import ContractError, LimitExceeded, SigbasisError
from .monomials import Monomial, divide
from .sigcore import (
    SigPair,
    SigSet,
    find_regular_reducer,
    multiply,
    regular_normal_form_with_steps,
    syzygy_signatures,
)
from .textio import render_monomial

__all__ = [
    "Strategy",
    "Limits",
    "SigTree",
    "TreeNode",
    "RunStats",
    "RunResult",
    "CertificateReport",
    "rewrite_basis_at",
    "select_reductant_sigtree",
    "select_reductant_f5",
    "run",
    "faugere_certificate",
    "validate_sigtree",
    "export_dot",
]

STRATEGY_KINDS = ("in_order", "min_lm", "f5", "f5_pruned", "f4")


@dataclass(frozen=True, slots=True)
class Strategy:
    kind: str
    batch_size: int = 1

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ContractError(f"unknown strategy {self.kind!r}")
        if self.batch_size < 1:
            raise ContractError("batch size must be >= 1")

    @classmethod
    def in_order(cls):
        return cls("in_order")

    @classmethod
    def min_lm(cls):
        return cls("min_lm")

    @classmethod
    def f5(cls):
        return cls("f5")

    @classmethod
    def f5_pruned(cls):
        return cls("f5_pruned")

    @classmethod
    def f4(cls, batch_size: int):
        return cls("f4", batch_size)


@dataclass(frozen=True, slots=True)
class Limits:
    max_insertions: int = 10**6
    max_seconds: float = 300.0


@dataclass(slots=True)
class TreeNode:
    label: "SigPair | None"  # None only for the virtual root
    rank: int
    parent: int
    edge: "Monomial | None"  # multiplier from the parent, identity for roots
    children: list[int] = field(default_factory=list)


class SigTree:
    """Reduction-provenance forest; node index equals the labeled sigpair id."""

    def __init__(self):
        self.nodes = [TreeNode(None, -1, -1, None)]

    def add_node(self, label: SigPair, parent: int, rank: int, edge: Monomial) -> int:
        idx = len(self.nodes)
        if label.id != idx:
            raise ContractError(f"node index {idx} must equal sigpair id {label.id}")
        self.nodes.append(TreeNode(label, rank, parent, edge))
        self.nodes[parent].children.append(idx)
        return idx

    def roots(self):
        return list(self.nodes[0].children)

    def ancestors(self, idx: int):
        out = []
        cur = self.nodes[idx].parent
        while cur > 0:
            out.append(cur)
            cur = self.nodes[cur].parent
        return out

    def __len__(self):
        return len(self.nodes) - 1


@dataclass(slots=True)
class RunStats:
    iterations: int = 0
    insertions: int = 0
    zero_reductions: int = 0
    reduction_steps: int = 0
    peak_queue: int = 0


@dataclass(slots=True)
class RunResult:
    basis: SigSet
    tree: SigTree
    syzygies: set
    stats: RunStats


@dataclass(slots=True)
class CertificateReport:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok


def rewrite_basis_at(G: SigSet, sigma: Monomial) -> bool:
    """No realization at sigma, or some realization is regular-irreducible."""
    spec = G.monoid
    sigma_key = G.sig_order.key(sigma)
    realized = False
    # newest first: the member inserted at sigma, if any, is the likely witness
    for g in reversed(G.members):
        a = divide(g.sig, sigma, spec)
        if a is None:
            continue
        realized = True
        if g.part.is_zero:
            return True
        target = g.part.lm.mul(a)
        if find_regular_reducer(target, sigma, G, _sigma_key=sigma_key) is None:
            return True
    return not realized


def select_reductant_sigtree(sigma: Monomial, tree: SigTree, G: SigSet, child_order=None):
    """Descend from the virtual root through children whose signature divides
    sigma; return (node index, multiplier, reductant)."""
    spec = G.monoid
    k = 0
    while True:
        moved = False
        children = tree.nodes[k].children
        if child_order is not None:
            children = child_order(children)
        for c in children:
            if divide(tree.nodes[c].label.sig, sigma, spec) is not None:
                k = c
                moved = True
                break
        if not moved:
            break
    if k == 0:
        raise ContractError("no root signature divides the requested signature")
    label = tree.nodes[k].label
    a = divide(label.sig, sigma, spec)
    return k, a, multiply(a, label)


def select_reductant_f5(sigma: Monomial, G: SigSet):
    """Most recent member whose signature divides sigma; zero-part members
    short-circuit the scan (the signature is then a recorded syzygy)."""
    spec = G.monoid
    best = None
    for g in G.members:  # members are in ascending id order
        a = divide(g.sig, sigma, spec)
        if a is None:
            continue
        best = (g, a)
        if g.part.is_zero:
            break
    if best is None:
        raise ContractError("no member signature divides the requested signature")
    return best


def _select_min_lm(sigma: Monomial, G: SigSet):
    """All realizations of sigma, keeping the smallest part leading monomial;
    ties break toward the smallest id."""
    spec = G.monoid
    part_key = G.ctx.order.key
    best = None
    for g in G.members:
        a = divide(g.sig, sigma, spec)
        if a is None:
            continue
        glm = g.part.lm
        shifted = glm if glm.is_zero else glm.mul(a)
        cand = (part_key(shifted), g.id)
        if best is None or cand < best[0]:
            best = (cand, g, a)
    if best is None:
        raise ContractError("no member signature divides the requested signature")
    return best[1], best[2]


class _TraceWriter:
    def __init__(self, sink, variables):
        self.sink = sink
        self.variables = variables

    def __call__(self, event: dict):
        if self.sink is None:
            return
        out = {}
        for k, v in event.items():
            if isinstance(v, Monomial):
                out[k] = render_monomial(v, self.variables)
            else:
                out[k] = v
        self.sink(out)


def _check_invariant(G: SigSet, Q: CriticalQueue, pruned: bool, cache: dict):
    spec = G.monoid
    pending = Q.snapshot()
    # the critical set only changes when G grows
    if cache.get("size") != len(G.members):
        cache["size"] = len(G.members)
        cache["critical"] = critical_set(G)
    for sigma in cache["critical"]:
        if pruned:
            covered = any(divide(tau, sigma, spec) is not None for tau in pending)
        else:
            covered = sigma in Q
        if not covered and not rewrite_basis_at(G, sigma):
            raise SigbasisError(
                f"queue invariant violated at {sigma!r} ({'pruned' if pruned else 'plain'} mode)"
            )


def run(
    prebasis: SigSet,
    strategy: Strategy,
    limits: Limits = Limits(),
    trace=None,
    debug_invariant_stride: int = 0,
    pop_shuffle_seed=None,
    child_order=None,
) -> RunResult:
    """Extend the prebasis to a certified rewrite basis.

    ``trace`` receives one dict per event (queue mutations, pops, selections,
    reductions, insertions, skips).  ``debug_invariant_stride=k`` asserts the
    queue invariant at every k-th loop head.  ``pop_shuffle_seed`` replaces
    the min-pop with a seeded random pop (test-only, out-of-order handling).
    """
    if prebasis.origin == "adhoc":
        raise ContractError("engine input must come from a prebasis constructor")
    ctx = prebasis.ctx
    emit = _TraceWriter(trace, ctx.variables)
    G = SigSet(ctx, prebasis.sig_order, (), origin=prebasis.origin)
    tree = SigTree()
    pruned = strategy.kind == "f5_pruned"
    Q = CriticalQueue(prebasis.sig_order, ctx.monoid, pruned_mode=pruned, trace=emit)
    stats = RunStats()
    rng = random.Random(pop_shuffle_seed) if pop_shuffle_seed is not None else None
    invariant_cache = {}

    for i, g in enumerate(prebasis.members, start=1):
        if g.id != i:
            raise ContractError("prebasis ids must be 1..r in order")
        G.add(g)
        tree.add_node(g, parent=0, rank=0, edge=ctx.identity_monomial())
        queue_update(Q, g, G)
    stats.peak_queue = len(Q)

    start = time.monotonic()

    def partial():
        return RunResult(G, tree, syzygy_signatures(G), stats)

    def select(sigma):
        if strategy.kind in ("f5", "f5_pruned"):
            g, a = select_reductant_f5(sigma, G)
            return g.id, a, multiply(a, g)
        if strategy.kind == "min_lm":
            g, a = _select_min_lm(sigma, G)
            return g.id, a, multiply(a, g)
        return select_reductant_sigtree(sigma, tree, G, child_order=child_order)

    def reduce_and_insert(sigma, node_k, a, reductant, rank, extra_reducers=None):
        # ids follow tree size so that batched insertions stay sequential
        # even before their sigpairs join G
        f = SigPair(reductant.part, sigma, len(tree.nodes))
        if extra_reducers is None:
            g_new, steps = regular_normal_form_with_steps(f, G)
        else:
            g_new, steps = _batch_normal_form(f, G, extra_reducers)
        stats.reduction_steps += steps
        stats.insertions += 1
        if g_new.part.is_zero:
            stats.zero_reductions += 1
        emit(
            {
                "event": "reduce",
                "signature": sigma,
                "lm": g_new.part.lm,
                "steps": steps,
            }
        )
        emit(
            {
                "event": "insert",
                "signature": sigma,
                "node": g_new.id,
                "parent": node_k,
                "multiplier": a,
                "lm": g_new.part.lm,
                "steps": steps,
            }
        )
        tree.add_node(g_new, parent=node_k, rank=rank, edge=a)
        return g_new

    while len(Q):
        if stats.insertions >= limits.max_insertions:
            raise LimitExceeded("insertion cap exceeded", partial=partial())
        if time.monotonic() - start > limits.max_seconds:
            raise LimitExceeded("time cap exceeded", partial=partial())
        if debug_invariant_stride and stats.iterations % debug_invariant_stride == 0:
            _check_invariant(G, Q, pruned, invariant_cache)
        stats.iterations += 1
        rank = stats.iterations

        if strategy.kind == "f4":
            sigmas = Q.pop_batch(strategy.batch_size)
            picked = []
            for sigma in sigmas:
                node_k, a, reductant = select(sigma)
                emit(
                    {
                        "event": "select",
                        "signature": sigma,
                        "node": node_k,
                        "multiplier": a,
                        "lm": reductant.part.lm,
                    }
                )
                if reductant.part.is_zero or find_regular_reducer(
                    reductant.part.lm, sigma, G
                ) is None:
                    emit({"event": "skip", "signature": sigma, "node": node_k,
                          "multiplier": a, "lm": reductant.part.lm})
                    continue
                picked.append((sigma, node_k, a, reductant))
            fresh = []
            for sigma, node_k, a, reductant in picked:  # ascending signature order
                g_new = reduce_and_insert(sigma, node_k, a, reductant, rank,
                                          extra_reducers=fresh)
                fresh.append(g_new)
            for g_new in fresh:
                G.add(g_new)
                queue_update(Q, g_new, G)
        else:
            if rng is None:
                sigma = Q.pop_min()
            else:
                sigma = Q.pop_at(rng.randrange(len(Q)))
            node_k, a, reductant = select(sigma)
            emit(
                {
                    "event": "select",
                    "signature": sigma,
                    "node": node_k,
                    "multiplier": a,
                    "lm": reductant.part.lm,
                }
            )
            if reductant.part.is_zero or find_regular_reducer(
                reductant.part.lm, sigma, G
            ) is None:
                emit({"event": "skip", "signature": sigma, "node": node_k,
                      "multiplier": a, "lm": reductant.part.lm})
            else:
                g_new = reduce_and_insert(sigma, node_k, a, reductant, rank)
                G.add(g_new)
                queue_update(Q, g_new, G)
        stats.peak_queue = max(stats.peak_queue, len(Q))

    certificate = faugere_certificate(G)
    if not certificate.ok:
        raise SigbasisError(
            f"completed run failed its own certificate at {certificate.failures!r}"
        )
    G.certified = True
    return RunResult(G, tree, syzygy_signatures(G), stats)


def _batch_normal_form(f: SigPair, G: SigSet, fresh):
    """Batch reduction: monoid multiples of G below the signature, plus the
    batch-local elements admitted whole (their signatures are already
    strictly smaller by the ascending processing order)."""
    sigma = f.sig
    sigma_key = G.sig_order.key(sigma)
    skey = G.sig_order.key

    def admit(mono):
        best = None
        found = find_regular_reducer(mono, sigma, G, _sigma_key=sigma_key)
        if found is not None:
            g, b = found
            best = ((skey(g.sig.mul(b)), g.id), g.part.mul_monomial(b))
        for h in fresh:
            if h.part.is_zero or h.part.lm != mono:
                continue
            cand = ((skey(h.sig), h.id), h.part)
            if best is None or cand[0] < best[0]:
                best = cand
        return best[1] if best else None

    part, steps = normal_form_with_steps(f.part, admit)
    return SigPair(part.monic(), sigma, f.id), steps


def faugere_certificate(G: SigSet) -> CertificateReport:
    """Combinatorial rewrite-basis check over the critical set."""
    key = G.sig_order.key
    failures = sorted(
        (s for s in critical_set(G) if not rewrite_basis_at(G, s)), key=key
    )
    return CertificateReport(not failures, failures)


def validate_sigtree(tree: SigTree, G: SigSet) -> list[str]:
    """Well-formedness report; empty means no violations.

    Checks, per node: the edge relation (signature of the child equals the
    edge multiplier applied to the parent's, with a strict leading-monomial
    drop); irreducibility modulo the ancestors; that an older sibling's
    signature never divides a younger sibling's (compared across distinct
    ranks only, since batch insertions share a rank); and that ranks are
    finite per level and increase from parent to child.
    """
    spec = G.monoid
    part_key = G.ctx.order.key
    skey = G.sig_order.key
    violations = []
    for idx in range(1, len(tree.nodes)):
        node = tree.nodes[idx]
        label = node.label
        if node.parent == 0:
            if node.rank != 0:
                violations.append(f"T4: root {idx} has nonzero rank")
            continue
        parent = tree.nodes[node.parent]
        if parent.rank >= node.rank:
            violations.append(f"T4: rank does not increase from {node.parent} to {idx}")
        expected_sig = parent.label.sig.mul(node.edge)
        if expected_sig != label.sig:
            violations.append(f"T1: edge signature relation broken at node {idx}")
        parent_lm = parent.label.part.lm
        shifted = parent_lm if parent_lm.is_zero else parent_lm.mul(node.edge)
        if not part_key(shifted) > part_key(label.part.lm):
            violations.append(f"T1: no strict leading-monomial drop at node {idx}")
    for idx in range(1, len(tree.nodes)):
        node = tree.nodes[idx]
        label = node.label
        if label.part.is_zero:
            continue
        ancestors = [tree.nodes[a].label for a in tree.ancestors(idx)]
        if not ancestors:
            continue
        anc = SigSet(G.ctx, G.sig_order, [], origin=G.origin)
        for i, sp in enumerate(reversed(ancestors), start=1):
            anc.add(SigPair(sp.part, sp.sig, i))
        if find_regular_reducer(label.part.lm, label.sig, anc) is not None:
            violations.append(f"T2: node {idx} reducible by an ancestor")
    for idx in range(len(tree.nodes)):
        kids = tree.nodes[idx].children
        for i, p in enumerate(kids):
            for q in kids[i + 1:]:
                np, nq = tree.nodes[p], tree.nodes[q]
                if np.rank == nq.rank:
                    continue
                older, younger = (np, nq) if np.rank < nq.rank else (nq, np)
                if divide(older.label.sig, younger.label.sig, spec) is not None:
                    violations.append(
                        f"T3: sibling signature divisibility under node {idx}"
                    )
    return violations


def tree_signature_consistent(tree: SigTree) -> bool:
    """Every node's signature equals the product of edge multipliers along
    its path applied to the root signature."""
    for idx in range(1, len(tree.nodes)):
        node = tree.nodes[idx]
        if node.parent == 0:
            continue
        acc = node.label.sig
        cur = node
        product = None
        while cur.parent != 0:
            product = cur.edge if product is None else product.mul(cur.edge)
            cur = tree.nodes[cur.parent]
        if cur.label.sig.mul(product) != acc:
            return False
    return True


def export_dot(result: RunResult, highlight=frozenset()) -> str:
    """DOT digraph of the sigtree: node label "id: lm(part)", edge label the
    multiplier, bold nodes for highlighted part leading monomials."""
    variables = result.basis.ctx.variables
    lines = ["digraph sigtree {", "  node [shape=box];"]
    tree = result.tree
    for idx in range(1, len(tree.nodes)):
        node = tree.nodes[idx]
        part = node.label.part
        text = "0" if part.is_zero else render_monomial(part.lm, variables)
        attrs = [f'label="{idx}: {text}"']
        if not part.is_zero and part.lm in highlight:
            attrs.append("style=bold")
        lines.append(f"  n{idx} [{', '.join(attrs)}];")
    for idx in range(1, len(tree.nodes)):
        node = tree.nodes[idx]
        if node.parent > 0:
            label = render_monomial(node.edge, variables)
            lines.append(f'  n{node.parent} -> n{idx} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
