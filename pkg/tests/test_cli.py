"""Problem parsing, flag surface, emitters, and exit codes."""

import json

import pytest

from sigbasis.cli import main, parse_problem, render_problem
from sigbasis.errors import ParseError

MORA_TEXT = """\
vars: y x
order: degrevlex
field: Q
setting: ring
gens:
x^2*y^2 - 1
y^5 - x^2*y
x^5 - x*y^2
"""


class TestParseProblem:
    def test_mora_file(self):
        spec = parse_problem(MORA_TEXT)
        assert spec.variables == ("y", "x")
        assert spec.field == "q" and spec.setting == "ring"
        assert len(spec.generators) == 3

    def test_comments_and_blanks_ignored(self):
        spec = parse_problem("# heading\n\nvars: x\n" "gens:\nx - 1\n")
        assert spec.generators == ("x - 1",)

    def test_empty_generators_valid(self):
        spec = parse_problem("vars: x\ngens:\n")
        assert spec.generators == ()

    def test_gf_field(self):
        spec = parse_problem("vars: x\nfield: GF 32003\ngens:\nx - 1\n")
        assert spec.field == "gf:32003"
        assert spec.build_field().p == 32003

    def test_monoid_setting(self):
        spec = parse_problem(
            "vars: x y\nsetting: monoid degmin=2\ngens:\nx^2 - x*y\n"
        )
        ctx = spec.build_context()
        assert not ctx.monoid.member((1, 0))

    def test_module_setting(self):
        spec = parse_problem(
            "vars: x y\nsetting: module rank=2 order=pot\ngens:\nx*e_1 - y*e_2\n"
        )
        ctx = spec.build_context()
        assert ctx.rank == 2

    def test_unknown_variable_diagnostic(self):
        with pytest.raises(ParseError) as info:
            parse_problem("vars: x\ngens:\nx - z\n")
        assert info.value.line == 3

    def test_malformed_coefficient_diagnostic(self):
        with pytest.raises(ParseError):
            parse_problem("vars: x\ngens:\n1/ - x\n")

    def test_inconsistent_rank_rejected(self):
        with pytest.raises(ParseError):
            parse_problem(
                "vars: x\nsetting: module rank=2 order=pot\ngens:\nx*e_5\n"
            )

    def test_roundtrip(self):
        spec = parse_problem(MORA_TEXT)
        assert parse_problem(render_problem(spec)) == spec
        two_block = parse_problem(
            "vars: y x\nsig_init: sum\ngens:\nx - 1\ngens2:\ny - 1\n"
        )
        assert parse_problem(render_problem(two_block)) == two_block
        gf = parse_problem("vars: x y\nfield: GF 7\nsig_order: pot\n"
                           "sig_init: unshifted\ngens:\n3*x + y\n")
        assert parse_problem(render_problem(gf)) == gf


class TestMainExitCodes:
    def test_run_file_ok(self, tmp_path, capsys):
        path = tmp_path / "mora.sys"
        path.write_text(MORA_TEXT)
        code = main(
            [
                "run",
                str(path),
                "--strategy",
                "in-order",
                "--sig-order",
                "top",
                "--sig-init",
                "shifted",
                "--verify",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "certificate=pass" in out

    def test_builtin_katsura4_f5_verify(self, capsys):
        assert main(["run", "--builtin", "katsura4", "--strategy", "f5", "--verify"]) == 0

    def test_builtin_mora_f4(self):
        assert main(["run", "--builtin", "mora", "--strategy", "f4", "--batch", "8"]) == 0

    def test_builtin_katsura6_f5_verify(self, capsys):
        assert (
            main(["run", "--builtin", "katsura6", "--strategy", "f5", "--verify"]) == 0
        )

    def test_sum_initialization_from_file(self, tmp_path, capsys):
        path = tmp_path / "sum.sys"
        path.write_text(
            "vars: y x\nsig_init: sum\ngens:\nx - 1\ngens2:\ny - 1\n"
        )
        assert main(["run", str(path), "--verify"]) == 0

    def test_sum_without_second_block_is_an_error(self, tmp_path, capsys):
        path = tmp_path / "sum.sys"
        path.write_text("vars: y x\nsig_init: sum\ngens:\nx - 1\n")
        assert main(["run", str(path)]) == 1

    def test_empty_generator_list_runs(self, tmp_path, capsys):
        path = tmp_path / "empty.sys"
        path.write_text("vars: x\ngens:\n")
        assert main(["run", str(path)]) == 0

    def test_parse_error_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.sys"
        bad.write_text("vars: x\ngens:\nx - q\n")
        assert main(["run", str(bad)]) == 1

    def test_usage_error_exit_1(self, capsys):
        assert main(["run", "--builtin", "mora", "--strategy", "bogus"]) == 1

    def test_missing_input_exit_1(self, capsys):
        assert main(["run"]) == 1

    def test_limit_exit_3(self, capsys):
        assert (
            main(["run", "--builtin", "mora", "--max-insertions", "1"]) == 3
        )

    def test_verify_deep(self, capsys):
        code = main(
            ["run", "--builtin", "mora", "--verify", "--verify-deep", "8"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "signature-slices=pass" in out and "syzygy-cover=pass" in out


class TestEmitters:
    def test_outputs_deterministic(self, tmp_path):
        args = [
            "run", "--builtin", "mora", "--verify",
            "--emit-dot", "", "--emit-json", "", "--emit-trace", "",
        ]

        def snapshot(tag):
            dot = tmp_path / f"{tag}.dot"
            js = tmp_path / f"{tag}.json"
            tr = tmp_path / f"{tag}.jsonl"
            argv = list(args)
            argv[argv.index("--emit-dot") + 1] = str(dot)
            argv[argv.index("--emit-json") + 1] = str(js)
            argv[argv.index("--emit-trace") + 1] = str(tr)
            assert main(argv) == 0
            return dot.read_bytes(), js.read_bytes(), tr.read_bytes()

        assert snapshot("a") == snapshot("b")

    def test_json_payload_shape(self, tmp_path):
        out = tmp_path / "run.json"
        assert main(["run", "--builtin", "mora", "--emit-json", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert set(payload) == {"config", "basis", "syzygies", "redundant_member_ids", "stats"}
        assert payload["stats"]["insertions"] > 0
        assert all("@" in row for row in payload["basis"])

    def test_dot_contains_highlights_with_verify(self, tmp_path):
        out = tmp_path / "run.dot"
        assert (
            main(["run", "--builtin", "mora", "--verify", "--emit-dot", str(out)]) == 0
        )
        text = out.read_text()
        assert "style=bold" in text

    def test_gf_flag_override(self, tmp_path):
        assert (
            main(["run", "--builtin", "katsura4", "--field", "gf:32003",
                  "--strategy", "f5", "--verify"]) == 0
        )
