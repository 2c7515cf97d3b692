import json

import pytest

from engine.errors import SessionSyntaxError
from processors.session_processor import SessionProcessor
from utils.session import CheckInvocation, IdealDef, Invocation, ModuleDef, RingDef, parse_ring, parse_session

EXAMPLE = "ring R = Q[x,y]/(x^2*y^2); ideal I = (x^5, x*y^7) in R; trace(I);"

NODE = """
# the node, with one branch and its maximal ideal
ring R = F5[x,y] / (x*y);
ideal I = (y) in R;
ideal J = (x, y) in R;
"""


def run(text):
    return SessionProcessor().process(text)


def test_statements_are_parsed_in_order():
    session = parse_session(EXAMPLE)
    assert len(session) == 3
    ring, ideal, op = session.statements
    assert isinstance(ring, RingDef) and ring.relations == ("x^2*y^2",)
    assert isinstance(ideal, IdealDef) and ideal.generators == ("x^5", "x*y^7")
    assert isinstance(op, Invocation) and op.args == ("I",)
    assert op.text == "trace(I);"
    assert session.symbols["I"].ring == "R"


def test_empty_session():
    assert len(parse_session("")) == 0
    assert len(parse_session("# nothing here\n;;")) == 0


def test_modules_and_checks_parse():
    session = parse_session(NODE + """
        module M = coker([[x, y], [0, x]]) in R;
        module N = R / I;
        check thm-3.9-census on R source=monomial_exhaustive window=-1..2 seed=3;
        check prop-3.8;
    """)
    coker, cyclic, check, ringless = session.statements[3:]
    assert isinstance(coker, ModuleDef) and coker.rows == (("x", "y"), ("0", "x"))
    assert cyclic.ideal == "I"
    assert isinstance(check, CheckInvocation)
    assert check.check_id == "thm-3.9"
    assert check.option_dict() == {"source": "monomial_exhaustive", "window": (-1, 2), "seed": 3}
    assert ringless.ring is None


@pytest.mark.parametrize("text, message", [
    ("ideal I = (x) in R;", "unknown ring R"),
    ("ring R = Q[x]; ring R = Q[y];", "redefinition of R"),
    ("ring R = Q[x]; ideal I = (x) in R; ext(1, I);", "ext expects 3 argument(s), got 2"),
    ("ring R = Q[x]; ideal I = (x) in R; syzygy(-1, I);", "syzygy index must be at least 0, got -1"),
    ("ring R = Q[x]; ideal I = (x) in R; cosyzygy(0, I);", "cosyzygy index must be at least 1, got 0"),
    ("ring R = Q[x]; trace(J);", "unknown identifier J"),
    ("ring R = Q[x]; ideal I = (z) in R;", "z"),
    ("ring R = Q[x]; frobnicate(R);", "unknown operation frobnicate"),
    ("ring R = Q[x]; check thm-3.9;", "needs 'on <ring>'"),
    ("ring R = Q[x]; check thm-9.9 on R;", "unknown check thm-9.9"),
    ("ring R = Q[x]; check thm-3.9 on R window=2..1;", "empty window"),
    ("ring R = F4[x];", "must be a prime"),
    ("ring R = Q[x]; ideal I = (x) in R", "expected 'semi'"),
    ("ring R = Q[x] @", "unexpected character"),
])
def test_parse_errors(text, message):
    with pytest.raises(SessionSyntaxError) as info:
        parse_session(text)
    assert message in str(info.value)
    assert info.value.exit_code == 2


def test_parse_errors_carry_positions():
    with pytest.raises(SessionSyntaxError) as info:
        parse_session("ring R = Q[x];\nideal I = (x) in S;")
    assert str(info.value).startswith("2:")


def test_mixed_rings_are_rejected():
    text = "ring R = Q[x]; ring S = Q[x]; ideal I = (x) in R; ideal J = (x) in S; hom(I, J);"
    with pytest.raises(SessionSyntaxError, match="different rings"):
        parse_session(text)


def test_ring_text():
    R = parse_ring("F2[x,y]/(x^2, y^2)")
    assert R.dimension() == 4
    with pytest.raises(SessionSyntaxError):
        parse_ring("F2[x,y] extra")


def test_trace_of_a_grade_zero_ideal():
    result = run(EXAMPLE)
    assert result.exit_code == 0
    payload = json.loads(result.to_json(timings=False))
    trace = payload["results"][2]["value"]
    assert set(trace["trace"]) == {"x^2", "x*y^2"}
    assert trace["proper"] is True


def test_operations_over_the_node():
    result = run(NODE + """
        rigid(J); rigid(I); grade(I); free(J);
        triad(J, R); is_trace(I, R); ann(I); length(I);
    """)
    assert result.exit_code == 0
    values = [r.value for r in result.results[3:]]
    assert values[0]["rigid"] is False
    assert values[0]["free"] is False
    assert values[0]["ext1_dim"] > 0
    assert values[1]["rigid"] is True
    assert values[2] == {"grade": 0}
    assert values[3] == {"free": False, "minimal_generators": 2}
    assert values[4]["all_three"] is False
    assert values[4]["trace_module"] is True
    assert values[5] == {"trace_module": True}
    assert values[6] == {"annihilator": ["x"]}
    assert values[7] == {"length": None}


def test_resolutions_and_ext():
    result = run("""
        ring R = F2[x,y]/(x^2, y^2);
        ideal m = (x, y) in R;
        module k = R / m;
        resolve(3, k); ext(1, k, k); gb(m); gorenstein(R); socle(m);
    """)
    assert result.exit_code == 0
    betti, ext1, gb, gorenstein, socle = [r.value for r in result.results[3:]]
    assert betti == {"betti": [1, 2, 3, 4], "complete": False}
    assert ext1["length"] == 2
    assert set(gb["groebner_basis"]) == {"x", "y"}
    assert gorenstein == {"gorenstein": True}
    assert socle["generators"] == ["x*y"]


def test_checks_run_inside_sessions():
    result = run("ring R = F2[x,y]/(x^2, y^2); check thm-3.9 on R source=monomial_exhaustive;")
    assert result.exit_code == 0
    check = result.results[1]
    assert check.kind == "check"
    assert check.value.verdict == "pass"
    assert "thm-3.9" in result.to_text()


def test_parse_error_exits_two():
    result = run("ring R = Q[x]; ideal I = (y) in R;")
    assert result.exit_code == 2
    assert len(result.results) == 1
    assert result.results[0].kind == "error"


def test_engine_errors_stop_the_session():
    result = run("ring R = Q[x]/(1); ideal I = (x) in R; length(I);")
    assert result.exit_code == 2
    assert [r.kind for r in result.results] == ["error"]
    assert "ZeroRingError" in result.results[0].value["error"]


def test_failed_statements_are_logged_with_their_text(caplog):
    with caplog.at_level("ERROR", logger="processors.session_processor"):
        result = run("ring R = F2[x,y]/(x^2, x*y, y^2); ideal I = (x) in R; cosyzygy(1, I); gorenstein(R);")
    assert result.exit_code == 2
    assert [r.kind for r in result.results] == ["ring", "ideal", "error"]
    assert "NotGorensteinError" in result.results[-1].value["error"]
    assert "Error executing cosyzygy(1, I);" in caplog.text


def test_text_and_unknown_formats():
    result = run(EXAMPLE)
    assert "> trace(I);" in result.render("text")
    with pytest.raises(ValueError):
        result.render("yaml")
