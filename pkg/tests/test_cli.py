"""Tests for problem parsing, command dispatch, and the example registry."""

import json

import pytest

from bvkit.polynomial_engine import poly_to_str
from bvkit.tate import TateResolution, build_resolution
from bvkit.bv_solver import MasterSolution
from bvkit.cli import (
    EXAMPLES,
    ProblemError,
    display_names,
    display_str,
    parse_problem,
    run_command,
)

CIRCLE_TEXT = "vars x y;\nS0 = (x^2+y^2-1)^2/4;\n"


@pytest.fixture()
def circle_file(tmp_path):
    path = tmp_path / "circle.bv"
    path.write_text(CIRCLE_TEXT)
    return str(path)


class TestParseProblem:
    def test_single_coordinate(self):
        spec = parse_problem("vars x; S0 = x^2;")
        assert spec.coordinates == ("x",)
        assert poly_to_str(spec.s0) == "x^2"
        assert spec.partials is None

    def test_circle_action(self):
        spec = parse_problem(CIRCLE_TEXT)
        assert spec.coordinates == ("x", "y")
        assert spec.s0.total_degree() == 4
        parts = spec.action_partials()
        assert [poly_to_str(p) for p in parts] == \
            ["x^3 + x*y^2 - x", "x^2*y + y^3 - y"]

    def test_unbound_variable_with_position(self):
        with pytest.raises(ProblemError, match="unbound variable 'z'") as e:
            parse_problem("vars x; S0 = x + z;")
        assert e.value.line == 1

    def test_partials_mode(self):
        spec = parse_problem("vars x y; dS0 = x^3 + x*y^2 - x, x^2*y + y^3 - y;")
        assert spec.s0 is None
        assert len(spec.partials) == 2

    def test_non_closed_form_rejected(self):
        with pytest.raises(ProblemError, match="not closed"):
            parse_problem("vars x y; dS0 = y, -x;")

    def test_partial_count_checked(self):
        with pytest.raises(ProblemError, match="2 components"):
            parse_problem("vars x y; dS0 = x;")

    def test_options(self):
        spec = parse_problem(
            "vars x; S0 = x^2; option depth=3; option pmax=2;"
            " option bound=6; option order=lex;")
        assert spec.options == {"depth": 3, "pmax": 2, "bound": 6,
                                "order": "lex"}

    def test_unknown_option_rejected(self):
        with pytest.raises(ProblemError, match="unknown option"):
            parse_problem("vars x; S0 = x; option colour=red;")

    def test_missing_semicolon(self):
        with pytest.raises(ProblemError, match="missing its ';'"):
            parse_problem("vars x; S0 = x^2")

    def test_action_before_vars(self):
        with pytest.raises(ProblemError, match="declared before"):
            parse_problem("S0 = x^2; vars x;")

    def test_duplicate_action(self):
        with pytest.raises(ProblemError, match="already declared"):
            parse_problem("vars x; S0 = x; S0 = x^2;")

    def test_error_reports_second_line(self):
        with pytest.raises(ProblemError) as e:
            parse_problem("vars x;\nS0 = x + q;")
        assert e.value.line == 2

    def test_repr_shows_mode(self):
        spec = parse_problem("vars x; S0 = x^2;")
        assert "s0" in repr(spec)


class TestDisplay:
    def test_circle_names(self):
        res = build_resolution(["x", "y"], s0="(x^2+y^2-1)^2/4", depth=3)
        names = display_names(res.table)
        assert names["xs"] == "x*"
        assert names["b1"] == "β" and names["bs1"] == "β*"
        assert names["b2"] == "γ"
        # two degree-3 ghosts take xi and eta
        assert names["b3"] == "ξ" and names["b4"] == "η"

    def test_star_collision_avoided(self):
        res = build_resolution(["x", "y"], s0="(x^2+y^2-1)^2/4", depth=2)
        names = display_names(res.table)
        shown = display_str("(-1)*xs*ys", names)
        assert shown == "(-1) x* y*"

    def test_repeated_degree_names_are_numbered(self):
        from bvkit.bv_solver import faddeev_popov
        c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        c[0][1][2] = -1
        c[1][0][2] = 1
        c[1][2][0] = -1
        c[2][1][0] = 1
        c[2][0][1] = -1
        c[0][2][1] = 1
        sol = faddeev_popov("(x^2+y^2+z^2-1)^2",
                            [["0", "-z", "y"], ["z", "0", "-x"],
                             ["-y", "x", "0"]],
                            structure=c, coords=["x", "y", "z"])
        names = display_names(sol.resolution.table)
        assert names["b1"] == "β1" and names["b3"] == "β3"


class TestCommands:
    def test_tate_human(self, circle_file, capsys):
        assert run_command(["tate", "--depth", "3", circle_file]) == 0
        out = capsys.readouterr().out
        assert "acyclic through degree -3: yes" in out
        assert "β*" in out

    def test_tate_json_round_trip(self, circle_file, capsys):
        assert run_command(["tate", "--depth", "2", "--json",
                            circle_file]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert set(obj) >= {"coords", "depth", "generators", "partials"}
        back = TateResolution.from_json_obj(obj)
        assert back.to_json_obj() == obj

    def test_solve_json_round_trip(self, circle_file, capsys):
        assert run_command(["solve", "--pmax", "2", "--json",
                            circle_file]) == 0
        obj = json.loads(capsys.readouterr().out)
        sol = MasterSolution.from_json_obj(obj)
        assert sol.order == 2
        assert sol.to_json_obj() == obj

    def test_solve_human_shows_low_order_display(self, circle_file, capsys):
        assert run_command(["solve", "--pmax", "1", circle_file]) == 0
        out = capsys.readouterr().out
        assert "(x) y* β" in out and "(-y) x* β" in out

    def test_solve_depth_must_cover_order(self, circle_file, capsys):
        assert run_command(["solve", "--depth", "2", "--pmax", "3",
                            circle_file]) == 2
        assert "depth at least 4" in capsys.readouterr().err

    def test_verify_saved_solution(self, circle_file, tmp_path, capsys):
        out = tmp_path / "sol.json"
        assert run_command(["solve", "--pmax", "2", "--json", "--out",
                            str(out), circle_file]) == 0
        assert run_command(["verify", str(out)]) == 0
        assert "verdict: ok" in capsys.readouterr().out

    def test_verify_beyond_certified_order_fails(self, circle_file, tmp_path,
                                                 capsys):
        out = tmp_path / "sol.json"
        run_command(["solve", "--pmax", "1", "--json", "--out", str(out),
                     circle_file])
        assert run_command(["verify", "--pmax", "5", str(out)]) == 1
        assert "residual weight" in capsys.readouterr().err

    def test_gauge_relates_a_solution_to_itself(self, circle_file, tmp_path,
                                                capsys):
        out = tmp_path / "sol.json"
        run_command(["solve", "--pmax", "2", "--json", "--out", str(out),
                     circle_file])
        assert run_command(["gauge", str(out), str(out)]) == 0
        assert "matches mod F^3: yes" in capsys.readouterr().out

    def test_brst_h0_matches_the_reference_dimension(self, circle_file,
                                                     capsys):
        assert run_command(["brst", "h0", "--bound", "6", circle_file]) == 0
        out = capsys.readouterr().out
        assert "dim 2" in out and "x^2 + y^2" in out

    def test_brst_h1_json(self, circle_file, capsys):
        assert run_command(["brst", "h1", "--bound", "6", "--json",
                            circle_file]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj == {"p": 1, "bound": 6, "dim": 1, "basis": [["y^2"]],
                       "stable": True}
        assert json.loads(json.dumps(obj)) == obj

    def test_brst_bound_from_problem_option(self, tmp_path, capsys):
        path = tmp_path / "p.bv"
        path.write_text(CIRCLE_TEXT + "option bound=6;\n")
        assert run_command(["brst", "h0", str(path)]) == 0
        assert "dim 2" in capsys.readouterr().out

    def test_brst_bound_required(self, circle_file, capsys):
        assert run_command(["brst", "h0", circle_file]) == 2
        assert "bound" in capsys.readouterr().err

    def test_brst_bracket(self, circle_file, capsys):
        assert run_command(["brst", "bracket", "--json", circle_file,
                            "x^2 + y^2", "x^2 + y^2"]) == 0
        assert json.loads(capsys.readouterr().out) == {"value": ["0"]}

    def test_brst_bracket_rejects_non_invariants(self, circle_file, capsys):
        assert run_command(["brst", "bracket", circle_file, "x", "1"]) == 2
        assert "not an exact invariant" in capsys.readouterr().err

    def test_brst_e2_columns(self, circle_file, capsys):
        assert run_command(["brst", "e2", "--bound", "6", "--pmax", "1",
                            "--json", circle_file]) == 0
        cols = json.loads(capsys.readouterr().out)
        assert [c["dim"] for c in cols] == [2, 1]
        assert cols[1]["basis"] == ["(y^2)*b1"]

    def test_lex_order_same_dimensions(self, circle_file, capsys):
        assert run_command(["brst", "h0", "--bound", "6", "--order", "lex",
                            circle_file]) == 0
        assert "dim 2" in capsys.readouterr().out

    def test_out_writes_file_and_stdout_stays_clean(self, circle_file,
                                                    tmp_path, capsys):
        target = tmp_path / "res.json"
        assert run_command(["tate", "--depth", "2", "--json", "--out",
                            str(target), circle_file]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["depth"] == 2

    def test_problem_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.bv"
        bad.write_text("vars x; S0 = x + qq;")
        assert run_command(["tate", bad.as_posix()]) == 2
        assert "unbound variable" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run_command(["tate", "/nonexistent/p.bv"]) == 2

    def test_usage_error(self, capsys):
        assert run_command([]) == 2


class TestExampleRegistry:
    def test_registry_ids(self):
        assert list(EXAMPLES) == [
            "exa1", "exa2", "exa3", "exa4", "exa5", "exa6", "exa7", "exa8",
            "fp-so3", "bundle-flat", "derham-a1"]

    def test_listing(self, capsys):
        assert run_command(["example", "exa1"]) == 0
        assert "flat direction" in capsys.readouterr().out

    def test_exa1_check_passes(self, capsys):
        assert run_command(["example", "exa1", "--check"]) == 0
        out = capsys.readouterr().out
        assert "ok" in out and "FAIL" not in out

    def test_exa7_check_passes(self, capsys):
        assert run_command(["example", "exa7", "--check"]) == 0

    def test_check_json_shape(self, capsys):
        assert run_command(["example", "exa2", "--check", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload[0]["id"] == "exa2" and payload[0]["ok"]
        assert all(c["ok"] for c in payload[0]["checks"])

    def test_unknown_id(self, capsys):
        assert run_command(["example", "exa99", "--check"]) == 2
        assert "unknown example" in capsys.readouterr().err

    def test_every_registered_check_passes(self, capsys):
        # the whole registry is the regression gate
        assert run_command(["example", "*", "--check"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        for i in EXAMPLES:
            assert i + ":" in out
