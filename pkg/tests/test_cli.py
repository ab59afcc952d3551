"""Script interpreter, exit codes, svg/serve subcommands."""

import socket

import pytest

from cyclekit.cli import cmd_svg, main, run_script, run_script_text

SECTION_CHAIN = """\
# tangent chain: circle, center, tangent family, contact point, radius
figure -1 -1
cycle a = (1, [0, 0], -1)
point C = (0, 0)
cycle l : tangent(a), passes_infinity, only_reals
cycle P : self_orthogonal, orthogonal(a), orthogonal(l), only_reals
cycle r : orthogonal(P), orthogonal(C), passes_infinity
assert check orthogonal l r
assert check orthogonal P a
"""


class TestRunScript:
    def test_tangent_chain_verdicts(self):
        code, text = run_script_text(SECTION_CHAIN)
        assert code == 0
        assert text.count("orthogonal: True") == 4
        assert "False" not in text and "Unknown" not in text

    def test_self_tangency_is_true(self):
        code, text = run_script_text(
            "figure -1 -1\ncycle a = (1,[0,0],-1)\nassert check tangent a a")
        assert code == 0
        assert text == "a and a are tangent: True"

    def test_malformed_relation_name(self):
        code, text = run_script_text(
            "figure -1 -1\ncycle a = (1,[0,0],-1)\ncycle x : parallel(a)")
        assert code == 1
        assert "line 3" in text and "parallel" in text

    def test_unknown_under_assert_exits_2(self):
        code, text = run_script_text(
            "figure -1 -1\n"
            "cycle a = (1, [0, 0], -1)\n"
            "cycle odd = (sqrt(w - 2000000), [1, 0], 1)\n"
            "assert check orthogonal odd a")
        assert code == 2
        assert text.endswith("orthogonal: Unknown")

    def test_false_assert_exits_1_plain_check_passes(self):
        base = "figure -1 -1\ncycle a = (1,[0,0],-1)\npoint C = (0,0)\n"
        assert run_script_text(base + "assert check orthogonal a C")[0] == 1
        code, text = run_script_text(base + "check orthogonal a C")
        assert code == 0
        assert text == "a and C are orthogonal: False"

    def test_header_discipline(self):
        code, text = run_script_text("figure -1 -1\nfigure -1 -1")
        assert code == 1 and "duplicate figure header" in text
        code, text = run_script_text("point C = (0,0)")
        assert code == 1 and "before the figure header" in text
        code, text = run_script_text("figure -1 -5")
        assert code == 1 and "signatures" in text

    def test_measure_statement(self):
        code, text = run_script_text(
            "figure -1 -1\ncycle a = (1,[0,0],-1)\npoint C = (0,0)\n"
            "measure inner a C")
        assert code == 0
        assert text == "inner(a, C) = 1"

    def test_valued_relations_parse(self):
        code, text = run_script_text(
            "figure -1 -1\n"
            "point O = (0, 0)\n"
            "point Q = (0, 2)\n"
            "cycle d : angle_cos_sq=(1/2)(R), orthogonal(O), orthogonal(Q),"
            " only_reals\n"
            "measure angle_cos_sq d R")
        assert code == 0
        assert text.splitlines() == ["angle_cos_sq(d, R) = 1/2"] * 2

    def test_steiner_power_value(self):
        code, text = run_script_text(
            "figure -1 -1\ncycle a = (1,[0,0],-1)\n"
            "cycle s : steiner_power=3(a)\nprint")
        assert code == 0
        assert "s: {" in text

    def test_print_statement(self):
        code, text = run_script_text(SECTION_CHAIN + "print\n")
        assert "generation 3" in text

    def test_parabolic_header(self):
        code, _ = run_script_text(
            "figure 0 0\ncycle a = (1, [0, 1], 0)\ncheck tangent a a")
        assert code == 0


class TestFileStatements:
    def test_svg_save_load_round_trip(self, tmp_path):
        script = tmp_path / "chain.ck"
        script.write_text(SECTION_CHAIN +
                          "svg out.svg u_l=1/2\n"
                          "save fig.json\n"
                          "load fig.json\n"
                          "assert check orthogonal l r\n"
                          "assert check orthogonal P a\n")
        code, text = run_script(script)
        assert code == 0
        # verdicts repeat identically after the round trip
        assert text.count("orthogonal: True") == 8
        assert (tmp_path / "out.svg").read_text().startswith("<svg")
        assert (tmp_path / "fig.json").stat().st_size > 0

    def test_missing_param_in_svg(self, tmp_path):
        script = tmp_path / "bad.ck"
        script.write_text(SECTION_CHAIN + "svg out.svg\n")
        code, text = run_script(script)
        assert code == 1
        assert "u_l" in text

    def test_missing_script_file(self, tmp_path):
        code, text = run_script(tmp_path / "nope.ck")
        assert code == 1 and "error" in text


class TestMain:
    def test_run_subcommand(self, tmp_path, capsys):
        script = tmp_path / "s.ck"
        script.write_text(SECTION_CHAIN)
        assert main(["--seed", "7", "run", str(script)]) == 0
        assert capsys.readouterr().out.count("True") == 4

    def test_svg_subcommand(self, tmp_path, capsys):
        script = tmp_path / "s.ck"
        script.write_text(SECTION_CHAIN + "save fig.json\n")
        assert main(["run", str(script)]) == 0
        out = tmp_path / "chain.svg"
        assert main(["svg", str(tmp_path / "fig.json"), "-o", str(out),
                     "-p", "u_l=1/2"]) == 0
        body = out.read_text()
        assert body.startswith("<svg") and "node-l.2-inst-0" in body
        # idempotent rewrite
        assert main(["svg", str(tmp_path / "fig.json"), "-o", str(out),
                     "-p", "u_l=1/2"]) == 0
        assert out.read_text() == body

    def test_svg_missing_param_lists_name(self, tmp_path, capsys):
        script = tmp_path / "s.ck"
        script.write_text(SECTION_CHAIN + "save fig.json\n")
        main(["run", str(script)])
        capsys.readouterr()
        code = main(["svg", str(tmp_path / "fig.json"),
                     "-o", str(tmp_path / "x.svg")])
        assert code == 1
        assert "u_l" in capsys.readouterr().out

    def test_cmd_svg_empty_figure(self, tmp_path):
        fig = tmp_path / "empty.json"
        script = tmp_path / "s.ck"
        script.write_text("figure -1 -1\nsave empty.json\n")
        assert main(["run", str(script)]) == 0
        code, text = cmd_svg(fig, tmp_path / "empty.svg", [])
        assert code == 0
        assert (tmp_path / "empty.svg").read_text().startswith("<svg")

    def test_serve_port_in_use(self, capsys):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        try:
            blocker.bind(("127.0.0.1", 0))
            port = blocker.getsockname()[1]
            code = main(["serve", "--port", str(port)])
        finally:
            blocker.close()
        assert code == 1
        assert "cannot bind" in capsys.readouterr().err
