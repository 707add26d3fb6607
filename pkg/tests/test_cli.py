import io
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropex import errors
from tropex.cli import (
    COMMANDS, format_polynomial, format_smooth, format_value, main, parse_point, parse_polynomial,
    parse_smooth, render_svg, run,
)
from tropex.cli.parser import parse_vector
from tropex.cli.svg import clip_segment
from tropex.errors import DuplicateExponentConflict, NotTwoDimensional, PolynomialSyntaxError
from tropex.semiring import ExplodedValue, GaussianRational
from tropex.troppoly import ExplodedPolynomial, Term, WeightedComplex, corner_locus

F = Fraction
WEDGE = json.dumps({"dim": 2, "constraints": [{"a": 0, "alpha": [1, 0]}, {"a": 0, "alpha": [1, 2]}]})
QUADRANT = json.dumps({"dim": 2, "constraints": [{"a": 0, "alpha": [1, 0]},
                                                 {"a": 0, "alpha": [0, 1]}]})


def ok(command, *args, stdin=""):
    result = run(command, list(args), stdin)
    assert result.status == 0, result.json
    return result.payload


def test_parse_examples():
    f = parse_polynomial("z1 + z2 + 1")
    assert len(f) == 3 and all(t.a == 0 for t in f.terms)
    g = parse_polynomial("t^1 z1^2 + (1+1i) z2^-1")
    assert set(g.terms) == {Term(1, 1, (2, 0)), Term(GaussianRational(1, 1), 0, (0, -1))}
    assert parse_polynomial("z1 + z1").terms == (Term(2, 0, (1,)),)
    assert parse_polynomial("-z1 - 1/2 t^{3/2}", 2).terms == \
        (Term(F(-1, 2), F(3, 2), (0, 0)), Term(-1, 0, (1, 0)))
    assert parse_polynomial("3 z1 z1 z2^-1").terms == (Term(3, 0, (2, -1)),)
    with pytest.raises(DuplicateExponentConflict):
        parse_polynomial("z1 + t^1 z1")


@pytest.mark.parametrize("text,line,column", [
    ("z1 + + z2", 1, 6), ("z1 +\n  z0", 2, 4), ("z1 z", 1, 5), ("(1+2 z1", 1, 6),
    ("1/0 z1", 1, 3), ("z1 * z2", 1, 4), ("", 1, 1),
])
def test_syntax_errors_report_positions(text, line, column):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_dimension_checks():
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("z3", 2)
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("zbar1")
    with pytest.raises(PolynomialSyntaxError):
        parse_smooth("t^1 z1")


def test_smooth_functions():
    f = parse_smooth("z1 zbar1 - 2 z2^2")
    assert f.nvars == 2 and format_smooth(f) == "-2 z2^2 + z1 zbar1"
    assert parse_smooth(format_smooth(f)) == f
    assert format_smooth(parse_smooth("0", 1)) == "0"


def test_points_and_values():
    p = parse_point("z1=-1t^0,z2=5t^1")
    assert p == (ExplodedValue(-1, 0), ExplodedValue(5, 1))
    assert parse_point("z2=(1-1i)t^{1/2}, z1=3") == \
        (ExplodedValue(3, 0), ExplodedValue(GaussianRational(1, -1), F(1, 2)))
    with pytest.raises(PolynomialSyntaxError):
        parse_point("z1=1t^0", 2)
    with pytest.raises(PolynomialSyntaxError):
        parse_point("z1=1,z1=2")
    assert format_value(ExplodedValue(GaussianRational(1, 1), F(1, 2))) == "(1+1i)t^1/2"
    assert parse_vector("1, -1/2,0") == (1, F(-1, 2), 0)


def test_printer():
    assert format_polynomial(parse_polynomial("1 + z2 + z1")) == "1 + z2 + z1"
    assert format_polynomial(parse_polynomial("-z1^2 + (2-1i) t^-1/3 z2 - 3")) == \
        "-3 + (2-1i) t^-1/3 z2 - z1^2"
    assert format_polynomial(ExplodedPolynomial(2, [])) == "0"


exponents = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
rationals = st.builds(F, st.integers(-9, 9), st.integers(1, 4))
coefficients = st.builds(GaussianRational, rationals, rationals).filter(lambda c: not c.is_zero)


@st.composite
def polynomials(draw):
    alphas = draw(st.lists(exponents, min_size=1, max_size=5, unique=True))
    terms = [(draw(coefficients), draw(rationals), a) for a in alphas]
    return ExplodedPolynomial(2, terms)


@given(polynomials())
def test_round_trip(f):
    assert parse_polynomial(format_polynomial(f), 2) == f


def test_every_error_has_a_distinct_exit_code():
    codes = [e.exit_code for e in errors.ALL_ERRORS]
    assert len(codes) == len(set(codes)) and 0 not in codes and 1 not in codes


def test_eval_command():
    out = ok("eval", "z1+z2+1", "--at", "z1=-1t^0,z2=5t^1")
    assert (out["coeff"], out["exp"], out["inZeroLocus"]) == (GaussianRational(0), 0, True)
    assert run("eval", ["z1+z2+1", "--at", "z1=-1t^0,z2=5t^1"]).json.count('"coeff": "0"') == 1


def test_tropicalize_command():
    out = ok("tropicalize", "z1 + z2 + 1", "--at", "1,-2")
    assert out["value"] == -2 and out["argmin"] == [[0, 1]]
    assert len(out["subdivision"]) == 1


def test_hypersurface_and_balance(tmp_path):
    target = tmp_path / "line.svg"
    result = run("hypersurface", ["z1+z2+1", "--svg", str(target)])
    assert result.status == 0
    assert result.payload["complex"]["rays"] == [[-1, -1], [0, 1], [1, 0]]
    assert target.read_text().count("<line") == 3
    assert ok("balance", "z1+z2+1")["balanced"] is True
    restricted = ok("hypersurface", "z1+z2+1", "--polytope", QUADRANT)
    assert restricted["complex"]["counts"] == {"0": 1, "1": 2}


def test_basis_commands():
    out = ok("basis", "--polytope", WEDGE)
    assert [b["alpha"] for b in out["basis"]] == [[1, 0], [1, 1], [1, 2]]
    assert out["relations"][0]["text"] == "zeta1*zeta3 = zeta2^2"
    rel = ok("relations", "--polytope", json.dumps(
        {"dim": 1, "constraints": [{"a": 0, "alpha": [1]}, {"a": 1, "alpha": [-1]}]}))
    assert rel["relations"][0]["text"] == "zeta1*zeta2 = 0"
    assert rel["relations"][0]["constant"] == "t^1"


def test_geometry_commands(tmp_path):
    cfg = {"components": ["X"], "divisors": ["D", "E"], "strata": [
        {"divisors": d, "component": "X"} for d in ([], ["D"], ["E"], ["D", "E"])]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    assert len(ok("explode-ncd", "--config", f"@{path}")["complex"]["cells"]) == 4
    assert len(ok("explode-ncd", "--config", "-", stdin=json.dumps(cfg))["complex"]["cells"]) == 4
    fan = json.dumps({"rays": [[1, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [0, 2]]})
    assert ok("explode-toric", "--fan", fan)["fan"]["rays"] == [[-1, -1], [0, 1], [1, 0]]
    square = json.dumps({"dim": 2, "constraints": [
        {"a": 0, "alpha": [1, 0]}, {"a": 1, "alpha": [-1, 0]},
        {"a": 0, "alpha": [0, 1]}, {"a": 1, "alpha": [0, -1]}]})
    assert ok("explode-toric", "--polytope", square)["fan"]["rays"] == \
        [[-1, 0], [0, -1], [0, 1], [1, 0]]
    assert run("explode-toric", ["--fan", fan, "--polytope", square]).status == \
        errors.NotAFan.exit_code
    seg = {"vertices": [[0], [2]]}
    halves = [{"vertices": [[0], [1]]}, {"vertices": [[1], [2]]}]
    refined = ok("refine", "--complex", json.dumps({"cells": [seg]}),
                 "--subdivisions", json.dumps({"0": halves}))
    assert len(refined["complex"]["cells"]) == 5
    fp = ok("fiber-product", "--f", '{"matrix": [[2]]}', "--g", '{"matrix": [[]], "sourceDim": 0}')
    assert (fp["multiplicity"], fp["zTransverse"]) == (2, False)


def test_family_commands(tmp_path):
    assert len(ok("degenerate", "--simplex", "2")["cells"]) == 4
    assert ok("pants", "--simplex", "3") == {"vertices": 9, "edges": 9, "rays": 9, "pants": 9}
    target = tmp_path / "fiber.svg"
    fib = ok("fiber", "--simplex", "2", "--w", "0", "--svg", str(target))
    assert fib["complex"]["counts"] == {"0": 1, "1": 3}
    assert target.read_text().count(">2</text>") == 3
    assert ok("fiber", "--simplex", "2", "--w", "1/2")["balanced"] is True
    assert run("degenerate", ["--family", '{"S": [[0, 0], [2, 0]]}']).status == \
        errors.MissingLatticePoint.exit_code
    assert run("degenerate", ["--simplex", "2", "--lift", "zero"]).status == \
        errors.NotUnimodular.exit_code


def test_strata_commands(monkeypatch):
    base = ["--polytope", QUADRANT]
    assert ok("strata-op", "e", "1 + z1 + z2", *base, "--stratum", "1,0")["result"] == "1 + z2"
    assert ok("strata-op", "delta", "1 + z1 + z2 + z1 z2", *base, "--stratum", "1,0",
              "--stratum", "0,1")["result"] == "z1 z2"
    assert ok("strata-op", "weight", *base, "--stratum", "1,1")["weight"] == "|z1|+|z2|"
    bound = ok("strata-op", "bound", "z1^2", *base, "--stratum", "1,0")
    assert bound["finite"] and bound["stable"] and bound["supRatio"] == 1
    monkeypatch.setenv("TROPEX_GRID", "1")
    coarse = ok("seminorm", "z1 z2", *base, "--k", "1")
    monkeypatch.setenv("TROPEX_GRID", "2")
    assert ok("seminorm", "z1 z2", *base, "--k", "1")["points"] > coarse["points"]
    monkeypatch.setenv("TROPEX_GRID", "x")
    assert run("seminorm", ["z1", *base]).status == errors.InvalidInput.exit_code
    monkeypatch.delenv("TROPEX_GRID")
    assert run("seminorm", ["z1", *base, "--delta", "2"]).status == errors.BadDelta.exit_code
    assert run("strata-op", ["e", "z1", *base, "--stratum", "-1,0"]).status == \
        errors.InvalidInput.exit_code


def test_error_payloads():
    bad = run("eval", ["z1 + + 1", "--at", "z1=1"])
    assert bad.status == errors.PolynomialSyntaxError.exit_code
    assert bad.payload["error"]["type"] == "PolynomialSyntaxError"
    assert "line 1, column 6" in bad.payload["error"]["message"]
    assert run("hypersurface", ["z1+z2+z3+1", "--svg", "/dev/null"]).status == \
        errors.NotTwoDimensional.exit_code
    assert run("basis", []).status == errors.InvalidInput.exit_code


def test_main_entry_point(capsys, monkeypatch):
    assert main(["eval", "z1+z2+1", "--at", "z1=-1t^0,z2=5t^1", "--float"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coeff"] == "0" and out["expFloat"] == 0.0
    assert main(["frobnicate"]) == errors.InvalidInput.exit_code
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "InvalidInput"
    monkeypatch.setattr("sys.stdin", io.StringIO("z1 + 1"))
    assert main(["tropicalize", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["polynomial"] == "1 + z1"


def test_float_siblings():
    out = json.loads(run("tropicalize", ["t^1/3 z1 + 1", "--at", "1/2"], floats=True).json)
    assert out["value"] == "0" and out["valueFloat"] == 0.0
    assert out["pieces"][1]["a"] == "1/3" and out["pieces"][1]["aFloat"] == pytest.approx(1 / 3)


@pytest.mark.parametrize("args", [
    ["basis", "--polytope", WEDGE], ["hypersurface", "z1+z2+1"], ["pants", "--simplex", "2"],
])
def test_output_is_deterministic(args):
    assert run(args[0], args[1:]).json == run(args[0], args[1:]).json


def test_all_commands_have_handlers():
    for command in COMMANDS:
        assert run(command, ["--help-me"]).status == errors.InvalidInput.exit_code


def test_svg_rendering():
    line = corner_locus(parse_polynomial("z1+z2+1"))
    svg = render_svg(line)
    assert svg.count("<line") == 3 and svg.count("<circle") == 1 and "<text" not in svg
    assert '<g class="complex"/>' in render_svg(WeightedComplex(2, [], 1))
    double = render_svg(corner_locus(parse_polynomial("1 + z1^2", 2)))
    assert double.count("<line") == 1 and ">2</text>" in double
    with pytest.raises(NotTwoDimensional):
        render_svg(corner_locus(parse_polynomial("z1+z2+z3+1")))
    assert render_svg(line, (-4, -1, 1, 1)) != svg


def test_clipping():
    seg = clip_segment((0.0, 0.0), (1.0, 0.0), 0.0, 100.0, (-1, -1, 2, 2))
    assert seg == ((0.0, 0.0), (2.0, 0.0))
    assert clip_segment((5.0, 5.0), (1.0, 0.0), 0.0, 1.0, (-1, -1, 2, 2)) is None
