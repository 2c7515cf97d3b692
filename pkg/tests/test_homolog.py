import pytest

from conftest import ideal
from engine import homolog
from engine.errors import EngineDisagreement, InvalidArgumentError, NotAnIdealError, NotASubmoduleError, NotGorensteinError
from engine.fpmod import free_module, ideal_basis, is_free, is_zero, length, quotient, quotient_by_ideal, residue_field
from engine.homolog import (
    annihilator,
    conormal_dual_vanishes,
    contains_regular_element,
    cosyzygy,
    cosyzygy_round_trip_holds,
    dual,
    ext,
    ext_is_zero,
    ext_length,
    generates,
    grade,
    hom_module,
    is_artinian_gorenstein,
    is_regular_on,
    is_trace_module,
    rigidity,
    socle,
    trace_ideal,
    trace_triad,
)
from utils.session import parse_ring


def same_ideal(I, J):
    return ideal_basis(I).same_as(ideal_basis(J))


def hom_to_quotient(I):
    return hom_module(I, quotient(I.ambient, I))


@pytest.mark.parametrize("method", ["hom_images", "left_kernel"])
def test_grade_zero_ideal_with_larger_trace(x2y2, method):
    I = ideal(x2y2, "x^5", "x*y^7")
    result = trace_ideal(I, method=method)
    assert same_ideal(result.trace, ideal(x2y2, "x^2", "x*y^2"))
    assert {str(g) for g in result.trace.ideal_generators} == {"x^2", "x*y^2"}
    assert result.proper
    assert grade(I) == 0
    assert not is_trace_module(I, I.ambient)


def test_branch_of_the_node_is_a_rigid_trace_ideal(node):
    I = ideal(node, "y")
    assert is_trace_module(I, I.ambient)
    assert not is_free(I)
    assert rigidity(I).rigid
    assert rigidity(I).ext1_dimension == 0
    assert same_ideal(annihilator(I), ideal(node, "x"))
    assert hom_to_quotient(I).is_zero()
    assert conormal_dual_vanishes(I)


def test_maximal_ideal_of_the_node(node):
    J = ideal(node, "x", "y")
    assert is_trace_module(J, J.ambient)
    assert not hom_to_quotient(J).is_zero()
    verdict = rigidity(J)
    assert not verdict.rigid
    assert not verdict.free
    assert same_ideal(trace_ideal(J).trace, J)
    assert not conormal_dual_vanishes(J)


@pytest.mark.parametrize("fixture", ["node", "x2y2"])
def test_free_proper_ideal_has_trace_r(fixture, request):
    R = request.getfixturevalue(fixture)
    I = ideal(R, "x + y")
    result = trace_ideal(I)
    assert not result.proper
    assert rigidity(I).free
    assert generates(I, I.ambient)


def test_unit_ideal_trace(exterior):
    assert not trace_ideal(ideal(exterior, "1 + x")).proper


def test_trace_triad_never_all_three(node):
    I = ideal(node, "y")
    triad = trace_triad(I, I.ambient)
    assert triad.trace_module
    assert not triad.hom_to_quotient_nonzero
    assert triad.rigid
    assert not triad.all_three
    J = ideal(node, "x", "y")
    assert trace_triad(J, J.ambient).to_dict() == {
        "trace_module": True,
        "hom_to_quotient_nonzero": True,
        "rigid": False,
    }


def test_trace_needs_an_ideal(exterior):
    with pytest.raises(NotAnIdealError):
        trace_ideal(residue_field(exterior))
    with pytest.raises(ValueError):
        trace_ideal(ideal(exterior, "x"), method="guess")


def test_trace_module_needs_its_ambient(exterior):
    I = ideal(exterior, "x")
    with pytest.raises(NotASubmoduleError):
        is_trace_module(I, free_module(exterior, 1))


def test_trace_methods_must_agree(exterior, monkeypatch):
    other = ideal(exterior, "x*y")
    monkeypatch.setitem(homolog._TRACE_METHODS, "left_kernel", lambda I: homolog._hom_images_trace(other))
    with pytest.raises(EngineDisagreement):
        trace_ideal(ideal(exterior, "x"))
    assert trace_ideal(ideal(exterior, "x"), cross_check=False).trace.ngens == 1


def test_gorenstein_ideals_are_trace_ideals(exterior):
    for gens in [("x",), ("y",), ("x*y",), ("x", "y"), ("x + y",)]:
        I = ideal(exterior, *gens)
        assert is_trace_module(I, I.ambient), gens


def test_non_gorenstein_ring_has_a_non_trace_ideal(square_of_max):
    I = ideal(square_of_max, "x")
    assert not is_trace_module(I, I.ambient)
    assert same_ideal(trace_ideal(I).trace, ideal(square_of_max, "x", "y"))


def test_ext_of_the_residue_field(exterior):
    k = residue_field(exterior)
    assert [ext_length(i, k, k) for i in range(4)] == [1, 2, 3, 4]
    assert length(ext(1, k, k)) == 2
    with pytest.raises(ValueError):
        ext(-1, k, k)


def test_self_injective_ring_has_no_higher_ext(chain):
    R = free_module(chain, 1)
    k = residue_field(chain)
    assert ext_is_zero(1, k, R)
    assert ext_is_zero(3, k, R)
    assert not ext_is_zero(0, k, R)


def test_chain_ring_ideals_are_not_rigid(chain):
    for a in (1, 2, 3):
        I = ideal(chain, f"x^{a}")
        verdict = rigidity(I)
        assert not verdict.rigid
        assert verdict.ext1_dimension == min(a, 4 - a)


def test_hom_and_dual(exterior):
    k = residue_field(exterior)
    R = free_module(exterior, 1)
    assert hom_module(R, k).dimension() == 1
    assert dual(k).dimension() == 1
    assert hom_module(k, k).dimension() == 1
    assert dual(R).dimension() == 4


def test_socles_and_gorenstein_detection(exterior, chain, square_of_max, node):
    assert length(socle(free_module(exterior, 1))) == 1
    assert length(socle(free_module(square_of_max, 1))) == 2
    assert is_artinian_gorenstein(exterior)
    assert is_artinian_gorenstein(chain)
    assert not is_artinian_gorenstein(square_of_max)
    assert not is_artinian_gorenstein(node)


def test_annihilators(exterior, node):
    assert same_ideal(annihilator(residue_field(exterior)), ideal(exterior, "x", "y"))
    assert same_ideal(annihilator(ideal(exterior, "x")), ideal(exterior, "x"))
    assert is_zero(annihilator(free_module(node, 1)))


def test_grades(plane, x2y2):
    assert grade(ideal(plane, "x", "y")) == 2
    assert grade(ideal(plane, "x")) == 1
    assert grade(ideal(x2y2, "x + y")) == 1
    with pytest.raises(NotAnIdealError):
        grade(ideal(plane, "0"))
    with pytest.raises(NotAnIdealError):
        grade(ideal(plane, "1"))


def test_regular_elements(x2y2):
    R = free_module(x2y2, 1)
    assert is_regular_on(x2y2.element("x + y"), R)
    assert not is_regular_on(x2y2.element("x"), R)
    assert contains_regular_element(ideal(x2y2, "x", "y"), R)
    assert not contains_regular_element(ideal(x2y2, "x*y"), R)


def test_units_are_regular_on_finite_length_modules(plane, exterior):
    k = residue_field(plane)
    assert contains_regular_element(ideal(plane, "1 + x"), k)
    assert contains_regular_element(ideal(plane, "x", "1 + y"), k)
    assert not contains_regular_element(ideal(plane, "x", "y^2"), k)
    E = free_module(exterior, 1)
    assert contains_regular_element(ideal(exterior, "1 + x"), E)
    assert contains_regular_element(ideal(exterior, "1 + x"), residue_field(exterior))
    assert not contains_regular_element(ideal(exterior, "x", "y"), E)


def test_regular_elements_off_the_origin():
    R = parse_ring("Q[x]/(x^3 - x^2)")
    N = quotient_by_ideal(R, [R.element("x^2")])
    assert contains_regular_element(ideal(R, "x - 1"), N)
    assert not contains_regular_element(ideal(R, "x"), N)


@pytest.mark.parametrize("point, hom_zero", [("x - 1, y", True), ("x, y^2", False), ("x^2, y", False)])
def test_hom_vanishes_iff_annihilator_has_a_regular_element(node, point, hom_zero):
    # Ann (y) = (x) is not primary to the maximal ideal
    M = ideal(node, "y")
    N = quotient_by_ideal(node, [node.element(g) for g in point.split(", ")])
    assert length(N) is not None
    assert same_ideal(annihilator(M), ideal(node, "x"))
    assert hom_module(M, N).is_zero() == hom_zero
    assert contains_regular_element(annihilator(M), N) == hom_zero


def test_hom_over_a_ring_with_no_grading_warns(caplog):
    R = parse_ring("Q[x]/(x^3 - x^2)")
    with caplog.at_level("WARNING", logger="engine.homolog"):
        H = hom_module(ideal(R, "x^2 + x"), free_module(R, 1))
    assert not H.is_zero()
    assert "left unminimized" in caplog.text


def test_cosyzygies_over_a_gorenstein_ring(chain):
    I = ideal(chain, "x")
    assert not is_zero(cosyzygy(I, 1))
    assert cosyzygy_round_trip_holds(I, 1)
    with pytest.raises(InvalidArgumentError) as info:
        cosyzygy(I, 0)
    assert info.value.exit_code == 2
    with pytest.raises(ValueError):
        ext(-1, I, I)


def test_cosyzygy_needs_gorenstein(square_of_max):
    with pytest.raises(NotGorensteinError):
        cosyzygy(residue_field(square_of_max), 1)


@pytest.mark.slow
def test_semigroup_traces(semigroup):
    m = ideal(semigroup, "a", "b", "c")
    assert same_ideal(trace_ideal(m).trace, m)
    assert not trace_ideal(ideal(semigroup, "a")).proper
    assert same_ideal(trace_ideal(ideal(semigroup, "a", "b")).trace, m)
