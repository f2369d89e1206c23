"""Builtin benchmark systems.

``mora``: three bivariate polynomials whose completion trace is small enough
to check step by step.  The published run of this system orders monomials
with x dominant, so the variable list declares y first (smallest first).

``katsura N``: the classical magnetism family in N variables a, b, c, ...
(largest first), built from the folding recurrence; odd-layer equations are
normalized by 2 so every leading coefficient is 1 or appears as printed in
the usual references.
"""

from __future__ import annotations

from .algebra import Context, Element, RationalField
from .errors import ContractError
from .monomials import MonoidSpec, Monomial, ScalarOrder

__all__ = ["mora_context", "mora_generators", "katsura", "builtin_problem"]

_LETTERS = "abcdefgh"


def mora_context(field=None) -> Context:
    field = field or RationalField()
    order = ScalarOrder("degrevlex", ("y", "x"))
    return Context(("y", "x"), order, MonoidSpec.full(), field)


def mora_generators(ctx: Context | None = None):
    ctx = ctx or mora_context()

    def poly(*terms):
        return Element.from_terms(
            ctx, [(Monomial((ey, ex)), ctx.field.from_int(c)) for c, ey, ex in terms]
        )

    g1 = poly((1, 2, 2), (-1, 0, 0))  # x^2 y^2 - 1
    g2 = poly((1, 5, 0), (-1, 1, 2))  # y^5 - x^2 y
    g3 = poly((1, 0, 5), (-1, 2, 1))  # x^5 - x y^2
    return [g1, g2, g3]


def katsura_context(n: int, field=None) -> Context:
    if not 3 <= n <= 8:
        raise ContractError("katsura size must be between 3 and 8")
    field = field or RationalField()
    names = tuple(reversed(_LETTERS[:n]))  # smallest variable first
    order = ScalarOrder("degrevlex", names)
    return Context(names, order, MonoidSpec.full(), field)


def katsura(n: int, field=None):
    """Generators of the katsura-n system, linear equation first, then the
    fold equations from layer n-2 down to 0."""
    ctx = katsura_context(n, field)
    field = ctx.field
    width = ctx.width

    def var(i):
        # u_i lives at slot of its letter; names are reversed letters
        slot = width - 1 - i
        e = [0] * width
        e[slot] = 1
        return tuple(e)

    def u(i):
        return abs(i)

    gens = []
    linear = [(var(0), field.from_int(1))]
    for i in range(1, n):
        linear.append((var(i), field.from_int(2)))
    linear.append(((0,) * width, field.from_int(-1)))
    gens.append(Element.from_terms(ctx, [(Monomial(e), c) for e, c in linear]))

    for m in range(n - 2, -1, -1):
        acc = {}
        for l in range(-(n - 1), n):
            i, j = u(l), u(m - l)
            if i >= n or j >= n:
                continue
            e = tuple(x + y for x, y in zip(var(i), var(j)))
            acc[e] = acc.get(e, 0) + 1
        norm = 2 if m % 2 else 1
        terms = [
            (Monomial(e), field.from_ratio(c, norm)) for e, c in acc.items()
        ]
        terms.append((Monomial(var(m)), field.from_ratio(-1, norm)))
        gens.append(Element.from_terms(ctx, terms))
    return ctx, gens


def builtin_problem(name: str, field=None):
    """Resolve a builtin name to (context, generators)."""
    name = name.strip().lower().replace(" ", "")
    if name == "mora":
        ctx = mora_context(field)
        return ctx, mora_generators(ctx)
    if name.startswith("katsura"):
        tail = name[len("katsura"):]
        if tail.isdigit():
            return katsura(int(tail), field)
    raise ContractError(f"unknown builtin system {name!r}")
