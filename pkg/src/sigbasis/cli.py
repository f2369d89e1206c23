"""Problem files, flags, and orchestration of engine plus verification.

Problem file format (line oriented, ``#`` comments allowed)::

    vars: y x            # first listed = smallest
    order: degrevlex
    field: Q             # or: GF 32003
    setting: ring        # or: module rank=2 order=pot
                         # or: monoid degmin=2 [exclude=m1,m2]
                         # or: monoid generated=x^2,x*y,y^2
    sig_order: top       # optional, default top
    sig_init: shifted    # optional, default shifted
    gens:
    x^2*y^2 - 1
    y^5 - x^2*y

Exit codes: 0 success, 1 usage or parse error, 2 certificate or verification
failure, 3 limit breach.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field, replace

from .algebra import Context, PrimeField, RationalField
from .engine import (
    Limits,
    Strategy,
    export_dot,
    faugere_certificate,
    run,
    tree_signature_consistent,
    validate_sigtree,
)
from .errors import LimitExceeded, ParseError, SigbasisError, StructureError
from .monomials import ModuleOrder, MonoidSpec, ScalarOrder
from .sigcore import (
    dominated_members,
    make_prebasis_shifted,
    make_prebasis_sum,
    make_prebasis_unshifted,
)
from .systems import builtin_problem
from .textio import (
    parse_element,
    parse_monomial,
    render_element,
    render_monomial,
    render_sigpair,
)
from .verify import (
    bounded_signature_basis_check,
    bounded_syzygy_check,
    buchberger,
    lm_ideal_equal,
)

__all__ = ["ProblemSpec", "parse_problem", "render_problem", "main"]

_VAR_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


@dataclass(frozen=True)
class ProblemSpec:
    """Parsed problem declaration; generators kept as canonical text.

    ``generators2`` holds the second summand for the ``sum`` initialization
    (a separate ``gens2:`` block in the file); it is empty otherwise.
    """

    variables: tuple[str, ...]
    order: str = "degrevlex"
    field: str = "q"
    setting: str = "ring"
    generators: tuple[str, ...] = ()
    sig_order: str = "top"
    sig_init: str = "shifted"
    generators2: tuple[str, ...] = ()

    def build_field(self):
        if self.field == "q":
            return RationalField()
        return PrimeField(int(self.field.split(":", 1)[1]))

    def build_context(self) -> Context:
        fld = self.build_field()
        scalar = ScalarOrder(self.order, self.variables)
        monoid = MonoidSpec.full()
        order = scalar
        if self.setting.startswith("module"):
            opts = _setting_options(self.setting)
            order = ModuleOrder(scalar, opts.get("order", "pot"), int(opts["rank"]))
        elif self.setting.startswith("monoid"):
            monoid = _parse_monoid_setting(self.setting, self.variables)
        return Context(self.variables, order, monoid, fld)

    def build_generators(self, ctx: Context):
        return [parse_element(text, ctx) for text in self.generators]


def _setting_options(setting: str) -> dict:
    out = {}
    for token in setting.split()[1:]:
        if "=" not in token:
            raise ParseError(f"malformed setting option {token!r}")
        k, v = token.split("=", 1)
        out[k] = v
    return out


def _parse_monoid_setting(setting: str, variables) -> MonoidSpec:
    opts = _setting_options(setting)
    if "degmin" in opts:
        exclusions = []
        for text in filter(None, opts.get("exclude", "").split(",")):
            exclusions.append(parse_monomial(text, variables).exps)
        return MonoidSpec.degree_truncated(int(opts["degmin"]), exclusions)
    if "generated" in opts:
        gens = [
            parse_monomial(text, variables).exps
            for text in opts["generated"].split(",")
        ]
        return MonoidSpec.generated(gens)
    raise ParseError(f"monoid setting needs degmin= or generated=: {setting!r}")


def parse_problem(text: str) -> ProblemSpec:
    """Parse and canonicalize a problem file."""
    header = {}
    gen_lines = []
    gen2_lines = []
    block = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if block is not None and not line.startswith("gens2:"):
            block.append((lineno, line))
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key in ("gens", "gens2"):
            block = gen_lines if key == "gens" else gen2_lines
            if value:
                block.append((lineno, value))
            continue
        header[key] = (lineno, value)

    if "vars" not in header:
        raise ParseError("missing 'vars:' line", 1, 1)
    lineno, names_text = header.pop("vars")
    names = tuple(names_text.split())
    if not names:
        raise ParseError("no variables declared", lineno, 1)
    for name in names:
        if not _VAR_NAME.match(name) or re.fullmatch(r"e_\d+", name):
            raise ParseError(f"bad variable name {name!r}", lineno, 1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names", lineno, 1)

    def take(key, default):
        if key in header:
            return header.pop(key)[1].lower()
        return default

    order = take("order", "degrevlex")
    if order not in ("degrevlex", "lex"):
        raise ParseError(f"unknown order {order!r}")
    field_text = take("field", "q")
    if field_text == "q":
        fld = "q"
    elif field_text.startswith("gf"):
        digits = field_text.replace("gf", "", 1).strip(" :")
        if not digits.isdigit():
            raise ParseError(f"malformed field {field_text!r}")
        fld = f"gf:{digits}"
    else:
        raise ParseError(f"unknown field {field_text!r}")
    setting = take("setting", "ring")
    if setting.split()[0] not in ("ring", "module", "monoid"):
        raise ParseError(f"unknown setting {setting!r}")
    sig_order = take("sig_order", "top")
    if sig_order not in ("top", "pot"):
        raise ParseError(f"sig_order must be top or pot, got {sig_order!r}")
    sig_init = take("sig_init", "shifted")
    if sig_init not in ("shifted", "unshifted", "sum"):
        raise ParseError(f"unknown sig_init {sig_init!r}")
    if header:
        key = next(iter(header))
        raise ParseError(f"unknown header line {key!r}", header[key][0], 1)

    spec = ProblemSpec(names, order, fld, setting, (), sig_order, sig_init)
    ctx = spec.build_context()

    def canonicalize(lines):
        out = []
        for lineno, line in lines:
            try:
                elem = parse_element(line, ctx, line=lineno)
            except StructureError as exc:
                raise ParseError(str(exc), lineno, 1) from exc
            out.append(render_element(elem))
        return tuple(out)

    return replace(
        spec,
        generators=canonicalize(gen_lines),
        generators2=canonicalize(gen2_lines),
    )


def render_problem(spec: ProblemSpec) -> str:
    field_text = "Q" if spec.field == "q" else f"GF {spec.field.split(':')[1]}"
    lines = [
        f"vars: {' '.join(spec.variables)}",
        f"order: {spec.order}",
        f"field: {field_text}",
        f"setting: {spec.setting}",
        f"sig_order: {spec.sig_order}",
        f"sig_init: {spec.sig_init}",
        "gens:",
    ]
    lines.extend(spec.generators)
    if spec.generators2:
        lines.append("gens2:")
        lines.extend(spec.generators2)
    return "\n".join(lines) + "\n"


def _build_prebasis(spec: ProblemSpec, ctx, gens):
    if spec.sig_init == "shifted":
        return make_prebasis_shifted(gens, spec.sig_order)
    if spec.sig_init == "unshifted":
        return make_prebasis_unshifted(gens, spec.sig_order)
    if not spec.generators2:
        raise ParseError("sum initialization needs a 'gens2:' block")
    gens2 = [parse_element(t, ctx) for t in spec.generators2]
    return make_prebasis_sum(gens, gens2, spec.sig_order, check=True)


def _result_json(result, spec: ProblemSpec, variables) -> dict:
    basis = result.basis
    return {
        "config": {
            "strategy": None,  # filled by caller
            "sig_order": spec.sig_order,
            "sig_init": spec.sig_init,
            "field": spec.field,
            "order": spec.order,
            "variables": list(variables),
        },
        "basis": [render_sigpair(m, variables) for m in basis.members],
        "syzygies": sorted(
            render_monomial(s, variables) for s in result.syzygies
        ),
        "redundant_member_ids": dominated_members(basis),
        "stats": {
            "iterations": result.stats.iterations,
            "insertions": result.stats.insertions,
            "zero_reductions": result.stats.zero_reductions,
            "reduction_steps": result.stats.reduction_steps,
            "peak_queue": result.stats.peak_queue,
        },
    }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _arg_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sigbasis", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="compute a certified rewrite basis")
    runp.add_argument("file", nargs="?", help="problem file (or use --builtin)")
    runp.add_argument("--builtin", help="builtin system: mora, katsuraN (3<=N<=8)")
    runp.add_argument(
        "--strategy",
        default="in-order",
        choices=["in-order", "min-lm", "f5", "f5-pruned", "f4"],
    )
    runp.add_argument("--batch", type=int, default=4, metavar="K",
                      help="f4 batch size")
    runp.add_argument("--sig-order", choices=["pot", "top"], default=None)
    runp.add_argument("--sig-init", choices=["shifted", "unshifted", "sum"],
                      default=None)
    runp.add_argument("--field", default=None, metavar="{q,gf:P}")
    runp.add_argument("--emit-dot", metavar="PATH")
    runp.add_argument("--emit-trace", metavar="PATH")
    runp.add_argument("--emit-json", metavar="PATH")
    runp.add_argument("--verify", action="store_true",
                      help="certificate + oracle comparison + tree validation")
    runp.add_argument("--verify-deep", type=int, metavar="D", default=None,
                      help="also run bounded span/syzygy checks to degree D")
    runp.add_argument("--max-insertions", type=int, default=10**6)
    runp.add_argument("--max-seconds", type=float, default=300.0)
    runp.add_argument("--debug-invariants", type=int, default=0, metavar="STRIDE",
                      help="assert the queue invariant every STRIDE iterations")
    return p


_STRATEGY_FLAGS = {
    "in-order": Strategy.in_order,
    "min-lm": Strategy.min_lm,
    "f5": Strategy.f5,
    "f5-pruned": Strategy.f5_pruned,
}


def _load_problem(args) -> ProblemSpec:
    if args.builtin and args.file:
        raise ParseError("give a file or --builtin, not both")
    if args.builtin:
        ctx, gens = builtin_problem(args.builtin)
        spec = ProblemSpec(
            ctx.variables,
            "degrevlex",
            "q",
            "ring",
            tuple(render_element(g) for g in gens),
        )
    elif args.file:
        with open(args.file, encoding="utf-8") as fh:
            spec = parse_problem(fh.read())
    else:
        raise ParseError("no input: give a problem file or --builtin NAME")
    overrides = {}
    if args.sig_order:
        overrides["sig_order"] = args.sig_order
    if args.sig_init:
        overrides["sig_init"] = args.sig_init
    if args.field:
        fld = args.field.lower()
        overrides["field"] = "q" if fld == "q" else f"gf:{fld.split(':')[1]}"
    return replace(spec, **overrides) if overrides else spec


def main(argv=None) -> int:
    try:
        args = _arg_parser().parse_args(argv)
        return _run_command(args)
    except (ParseError, SigbasisError) as exc:
        if isinstance(exc, LimitExceeded):
            print(f"limit exceeded: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run_command(args) -> int:
    spec = _load_problem(args)
    ctx = spec.build_context()
    gens = spec.build_generators(ctx)
    prebasis = _build_prebasis(spec, ctx, gens)
    if spec.generators2:
        # the oracle compares against the full generated submodule
        gens = gens + [parse_element(t, ctx) for t in spec.generators2]

    if args.strategy == "f4":
        strategy = Strategy.f4(args.batch)
    else:
        strategy = _STRATEGY_FLAGS[args.strategy]()
    limits = Limits(args.max_insertions, args.max_seconds)

    trace_rows = [] if args.emit_trace else None
    sink = trace_rows.append if trace_rows is not None else None
    try:
        result = run(
            prebasis,
            strategy,
            limits,
            trace=sink,
            debug_invariant_stride=args.debug_invariants,
        )
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 3

    variables = ctx.variables
    print(
        f"basis: {len(result.basis.members)} sigpairs "
        f"({result.stats.zero_reductions} syzygy markers), "
        f"{result.stats.insertions} insertions, "
        f"{result.stats.reduction_steps} reduction steps"
    )

    failed = False
    oracle_lms = None
    if args.verify or args.verify_deep is not None:
        cert = faugere_certificate(result.basis)
        tree_report = validate_sigtree(result.tree, result.basis)
        edge_ok = tree_signature_consistent(result.tree)
        gb = buchberger(gens, ctx.monoid)
        oracle_lms = gb.lm_set()
        part_lms = {
            m.part.lm for m in result.basis.members if not m.part.is_zero
        }
        lm_ok = lm_ideal_equal(part_lms, oracle_lms, ctx.monoid)
        print(
            f"verify: certificate={'pass' if cert.ok else 'FAIL'} "
            f"tree={'pass' if not tree_report and edge_ok else 'FAIL'} "
            f"oracle-lm-ideal={'pass' if lm_ok else 'FAIL'}"
        )
        failed = not (cert.ok and not tree_report and edge_ok and lm_ok)
    if args.verify_deep is not None:
        deep_d = args.verify_deep
        sig_report = bounded_signature_basis_check(result.basis, deep_d)
        print(f"verify-deep: signature-slices={'pass' if sig_report.ok else 'FAIL'}")
        failed = failed or not sig_report.ok
        if spec.sig_init == "shifted":
            syz_report = bounded_syzygy_check(gens, result, deep_d)
            print(f"verify-deep: syzygy-cover={'pass' if syz_report.ok else 'FAIL'}")
            failed = failed or not syz_report.ok

    if args.emit_dot:
        highlight = frozenset(oracle_lms) if oracle_lms else frozenset()
        with open(args.emit_dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(result, highlight))
    if args.emit_trace:
        with open(args.emit_trace, "w", encoding="utf-8") as fh:
            for row in trace_rows:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    if args.emit_json:
        payload = _result_json(result, spec, variables)
        payload["config"]["strategy"] = args.strategy
        if args.strategy == "f4":
            payload["config"]["batch"] = args.batch
        with open(args.emit_json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
