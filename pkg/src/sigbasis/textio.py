"""Text syntax for monomials, elements, and sigpairs.

Monomials: ``x^2*y^5``, module position as a trailing ``e_2`` factor, ``1``
for the identity, ``0`` for the zero monomial.  Elements: signed sums of
``coeff*monomial`` terms with rational coefficients written ``p/q``.
Sigpairs: ``part @ signature``.  Rendering is canonical (terms descending,
factors from the largest variable down), so parse(render(x)) == x.
"""

from __future__ import annotations

import re

from .algebra import Context, Element
from .errors import ParseError
from .monomials import Monomial, ZERO

__all__ = [
    "parse_monomial",
    "render_monomial",
    "parse_element",
    "render_element",
    "parse_sigpair_text",
    "render_sigpair",
]

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^@()]))"
)


def _tokenize(text, line=None):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", line, pos + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, tokens, line):
        self.tokens = tokens
        self.i = 0
        self.line = line

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, -1)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def done(self):
        return self.i >= len(self.tokens)

    def fail(self, msg, col=None):
        if col is None:
            col = self.peek()[2]
        raise ParseError(msg, self.line, col)


def _parse_factors(cur: _Cursor, variables):
    """Parse a product of variable powers and e_k markers; may be empty."""
    exps = [0] * len(variables)
    indices = []
    slots = {name: i for i, name in enumerate(variables)}
    saw = False
    while True:
        kind, value, col = cur.peek()
        if kind == "int" and value == "1":
            cur.next()
            saw = True
        elif kind == "name":
            cur.next()
            if value in slots:
                power = 1
                k2, v2, _ = cur.peek()
                if k2 == "op" and v2 == "^":
                    cur.next()
                    k3, v3, c3 = cur.next()
                    if k3 != "int":
                        cur.fail("exponent must be an integer", c3)
                    power = int(v3)
                exps[slots[value]] += power
            elif re.fullmatch(r"e_[1-9]\d*", value):
                indices.append(int(value[2:]))
            else:
                cur.fail(f"unknown variable {value!r}", col)
            saw = True
        else:
            break
        kind, value, col = cur.peek()
        if kind == "op" and value == "*":
            cur.next()
            continue
        break
    if not saw:
        return None
    return Monomial(tuple(exps), tuple(indices))


def parse_monomial(text: str, variables, line=None) -> Monomial:
    tokens = _tokenize(text, line)
    cur = _Cursor(tokens, line)
    if cur.peek()[:2] == ("int", "0"):
        cur.next()
        if not cur.done():
            cur.fail("trailing input after the zero monomial")
        return ZERO
    m = _parse_factors(cur, variables)
    if m is None or not cur.done():
        cur.fail("malformed monomial")
    return m


def render_monomial(m: Monomial, variables) -> str:
    if m.is_zero:
        return "0"
    parts = []
    for slot in range(len(variables) - 1, -1, -1):
        e = m.exps[slot]
        if e == 1:
            parts.append(variables[slot])
        elif e > 1:
            parts.append(f"{variables[slot]}^{e}")
    for i in m.indices:
        parts.append(f"e_{i}")
    return "*".join(parts) if parts else "1"


def _parse_coefficient(cur: _Cursor, field):
    kind, value, col = cur.peek()
    if kind != "int":
        return None
    save = cur.i
    cur.next()
    num = int(value)
    k2, v2, _ = cur.peek()
    if k2 == "op" and v2 == "/":
        cur.next()
        k3, v3, c3 = cur.next()
        if k3 != "int":
            cur.fail("denominator must be an integer", c3)
        return field.from_ratio(num, int(v3))
    k2, v2, _ = cur.peek()
    if k2 == "op" and v2 == "*":
        return field.from_int(num)
    if k2 in (None, "op"):
        # bare integer term (no following factors)
        return field.from_int(num)
    # an integer directly followed by a name is not valid syntax
    cur.i = save
    return None


def parse_element(text: str, ctx: Context, line=None) -> Element:
    """Parse a signed sum of coefficient-monomial terms."""
    tokens = _tokenize(text, line)
    cur = _Cursor(tokens, line)
    if cur.done():
        cur.fail("empty element")
    if cur.peek()[:2] == ("int", "0") and len(tokens) == 1:
        return Element.zero(ctx)
    field = ctx.field
    pairs = []
    sign = 1
    kind, value, col = cur.peek()
    if kind == "op" and value in "+-":
        sign = -1 if value == "-" else 1
        cur.next()
    while True:
        coeff = _parse_coefficient(cur, field)
        mono = None
        if coeff is not None:
            k, v, _ = cur.peek()
            if k == "op" and v == "*":
                cur.next()
                mono = _parse_factors(cur, ctx.variables)
                if mono is None:
                    cur.fail("expected a monomial after '*'")
        else:
            mono = _parse_factors(cur, ctx.variables)
            if mono is None:
                cur.fail("expected a term")
            coeff = field.one
        if mono is None:
            mono = ctx.identity_monomial()
        if sign < 0:
            coeff = field.neg(coeff)
        pairs.append((mono, coeff))
        if cur.done():
            break
        kind, value, col = cur.next()
        if kind != "op" or value not in "+-":
            cur.fail("expected '+' or '-' between terms", col)
        sign = -1 if value == "-" else 1
        if cur.done():
            cur.fail("dangling sign")
    return Element.from_terms(ctx, pairs)


def _render_coeff_mono(field, c, mono_text, first):
    c_str = field.render(c)
    negative = c_str.startswith("-")
    mag = c_str[1:] if negative else c_str
    if mono_text == "1":
        body = mag
    elif mag == "1":
        body = mono_text
    else:
        body = f"{mag}*{mono_text}"
    if first:
        return ("-" if negative else "") + body
    return (" - " if negative else " + ") + body


def render_element(f: Element) -> str:
    if f.is_zero:
        return "0"
    field = f.ctx.field
    out = []
    for n, (_, m, c) in enumerate(f.terms):
        out.append(_render_coeff_mono(field, c, render_monomial(m, f.ctx.variables), n == 0))
    return "".join(out)


def parse_sigpair_text(text: str, ctx: Context, line=None):
    """Split a ``part @ signature`` form; returns (Element, Monomial)."""
    if "@" not in text:
        raise ParseError("sigpair text needs a '@' separator", line, 1)
    part_text, sig_text = text.split("@", 1)
    part = parse_element(part_text.strip(), ctx, line)
    sig = parse_monomial(sig_text.strip(), ctx.variables, line)
    return part, sig


def render_sigpair(sp, variables) -> str:
    return f"{render_element(sp.part)} @ {render_monomial(sp.sig, variables)}"
