import pytest

from conftest import ideal
from engine.errors import GradingRequiredError, NotASubmoduleError
from engine.fpmod import (
    MatrixOverRing,
    PresentedModule,
    direct_sum,
    free_module,
    ideal_basis,
    is_free,
    is_zero,
    length,
    minimal_generators,
    minimize,
    quotient,
    quotient_by_ideal,
    residue_field,
    resolve,
    syzygy,
    syzygy_matrix,
    tensor,
    zero_module,
)
from utils.session import parse_ring


def test_lengths_over_the_exterior_ring(exterior):
    assert length(free_module(exterior, 1)) == 4
    assert length(free_module(exterior, 2)) == 8
    assert length(residue_field(exterior)) == 1
    assert length(ideal(exterior, "x", "y")) == 3
    assert length(ideal(exterior, "x*y")) == 1
    assert length(zero_module(exterior)) == 0


def test_infinite_length_is_none(node):
    assert length(free_module(node, 1)) is None
    assert length(quotient_by_ideal(node, [node.element("x")])) is None
    assert length(residue_field(node)) == 1


def test_zero_detection(exterior):
    assert is_zero(zero_module(exterior))
    assert is_zero(quotient_by_ideal(exterior, [exterior.one()]))
    assert not is_zero(residue_field(exterior))


def test_ideal_equality_ignores_generators(exterior):
    a = ideal(exterior, "x", "y")
    b = ideal(exterior, "x + y", "y", "x*y")
    assert ideal_basis(a).same_as(ideal_basis(b))
    assert not ideal_basis(a).same_as(ideal_basis(ideal(exterior, "x")))
    assert ideal_basis(ideal(exterior, "1 + x")).is_everything()


def test_zero_ideal_has_no_generators(exterior):
    I = ideal(exterior, "x^2")
    assert I.is_ideal
    assert I.ngens == 0
    assert is_zero(I)


def test_minimal_generators(exterior, node):
    assert minimal_generators(ideal(exterior, "x", "y", "x*y", "x + y")) == 2
    assert minimal_generators(ideal(node, "x", "x^2", "y")) == 2
    M = minimize(ideal(node, "x", "x^2"))
    assert M.ngens == 1
    assert M.is_ideal


def test_freeness(exterior, node):
    assert is_free(free_module(exterior, 3))
    assert not is_free(residue_field(exterior))
    assert not is_free(ideal(exterior, "x"))
    assert is_free(ideal(node, "x + y"))
    assert not is_free(ideal(node, "y"))


def test_koszul_betti_numbers(exterior):
    res = resolve(residue_field(exterior), 3)
    assert [res.rank(i) for i in range(4)] == [1, 2, 3, 4]
    assert not res.complete


def test_chain_ring_resolution_is_periodic(chain):
    res = resolve(quotient_by_ideal(chain, [chain.element("x^2")]), 4)
    assert [res.rank(i) for i in range(5)] == [1, 1, 1, 1, 1]


def test_free_module_resolution_stops(node):
    res = resolve(free_module(node, 2), 3)
    assert res.complete
    assert res.rank(0) == 2
    assert res.rank(5) == 0


def test_node_resolution_of_a_branch(node):
    # R/(y) over k[x,y]/(xy) is resolved by alternating multiplication by y and x
    res = resolve(quotient_by_ideal(node, [node.element("y")]), 4)
    assert [res.rank(i) for i in range(5)] == [1, 1, 1, 1, 1]


def test_first_syzygy_of_residue_field(exterior):
    m = syzygy(residue_field(exterior), 1)
    assert m.ngens == 2
    assert length(m) == 3
    assert syzygy(m, 0) is m


def test_syzygy_of_free_module_is_zero(exterior):
    assert is_zero(syzygy(free_module(exterior, 1), 1))


def test_invalid_resolution_requests(exterior):
    with pytest.raises(ValueError):
        resolve(residue_field(exterior), 0)
    with pytest.raises(ValueError):
        syzygy(residue_field(exterior), -1)


def test_ungraded_non_local_ring_needs_grading():
    R = parse_ring("Q[x]/(x^3 - x^2)")
    M = quotient_by_ideal(R, [R.element("x")])
    with pytest.raises(GradingRequiredError) as info:
        resolve(M, 2)
    assert info.value.exit_code == 2


def test_quotient_by_a_submodule(exterior):
    I = ideal(exterior, "x", "y")
    Q = quotient(I.ambient, I)
    assert length(Q) == 1
    with pytest.raises(NotASubmoduleError):
        quotient(free_module(exterior, 1), I)


def test_sums_and_tensors(exterior):
    k = residue_field(exterior)
    R = free_module(exterior, 1)
    assert length(direct_sum(k, R)) == 5
    assert length(tensor(k, k)) == 1
    assert length(tensor(k, R)) == 1


def test_cokernel_of_a_matrix(node):
    rows = [[node.element("x"), node.element("y")], [node.zero(), node.element("x")]]
    M = PresentedModule(node, MatrixOverRing.from_rows(node, rows, (0, 0)), (0, 0), label="M")
    assert M.ngens == 2
    assert M.is_graded()
    assert length(M) is None
    assert not is_zero(M)


@pytest.mark.parametrize("fixture, entries", [("plane", ["x", "y"]), ("node", ["x"]), ("exterior", ["x", "y"])])
def test_syzygy_matrix_columns_are_in_the_kernel(fixture, entries, request):
    R = request.getfixturevalue(fixture)
    A = MatrixOverRing.from_rows(R, [[R.element(e) for e in entries]], (0,))
    K = syzygy_matrix(A)
    assert K.nrows == len(entries)
    assert K.ncols >= 1
    for col in A.multiply(K).columns:
        assert all(p.is_zero() for p in col)
