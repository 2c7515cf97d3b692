import pytest

from conftest import ideal
from engine.errors import NotArtinianError, ResourceCapExceeded
from engine.fdalg import (
    algebraize,
    enumerate_ideals,
    fd_ext1,
    fd_hom,
    fd_length,
    fd_socle_dim,
    fd_trace,
    from_presented,
    ideal_module,
    quotient_module,
    regular_module,
    residue_module,
)
from engine.fpmod import length, residue_field
from engine.homolog import ext_length, hom_module, rigidity, socle, trace_ideal
from utils.config import override_settings


def test_structure_of_the_exterior_algebra(exterior):
    A = algebraize(exterior)
    assert A.dimension == 4
    assert A.is_local
    assert len(A.maximal_ideal_indices()) == 3
    assert fd_length(regular_module(A)) == 4


def test_non_artinian_ring_is_rejected(node):
    with pytest.raises(NotArtinianError):
        algebraize(node)


def test_socle_dimensions(exterior, square_of_max, chain):
    assert fd_socle_dim(regular_module(algebraize(exterior))) == 1
    assert fd_socle_dim(regular_module(algebraize(square_of_max))) == 2
    assert fd_socle_dim(residue_module(algebraize(chain))) == 1


def test_hom_dimensions(exterior):
    A = algebraize(exterior)
    k = residue_module(A)
    R = regular_module(A)
    assert fd_hom(k, R).dimension == 1
    assert fd_hom(R, k).dimension == 1
    assert fd_hom(R, R).dimension == 4


def test_ext1_of_residue_field(exterior, chain):
    k = residue_module(algebraize(exterior))
    assert fd_ext1(k, k) == 2
    k3 = residue_module(algebraize(chain))
    assert fd_ext1(k3, regular_module(k3.algebra)) == 0


def test_chain_ring_ext1(chain):
    A = algebraize(chain)
    for a in (1, 2, 3):
        I = ideal_module(A, [chain.element(f"x^{a}")])
        assert fd_ext1(I, I) == min(a, 4 - a)


def test_trace_in_a_non_gorenstein_ring(square_of_max):
    A = algebraize(square_of_max)
    I = ideal_module(A, [square_of_max.element("x")])
    basis, _ = fd_trace(I, regular_module(A))
    assert basis.shape[0] == 2


def test_quotient_module_dimensions(exterior):
    A = algebraize(exterior)
    assert quotient_module(A, [exterior.element("x")]).dimension == 2
    assert residue_module(A).dimension == 1


def test_presented_modules_convert(exterior):
    A = algebraize(exterior)
    assert from_presented(A, residue_field(exterior)).dimension == 1


def test_monomial_ideal_counts(exterior, chain, square_of_max):
    assert len(list(enumerate_ideals(algebraize(exterior)))) == 6
    assert len(list(enumerate_ideals(algebraize(chain)))) == 5
    # every subspace of the maximal ideal is an ideal here; the monomial ones are 0, (x), (y), (x, y), R
    assert len(list(enumerate_ideals(algebraize(square_of_max)))) == 5


def test_monomial_enumeration_is_ordered_by_dimension(chain):
    dims = [I.dimension for I in enumerate_ideals(algebraize(chain))]
    assert dims == sorted(dims) == [0, 1, 2, 3, 4]


def test_random_ideals_are_seeded(exterior):
    A = algebraize(exterior)
    first = [I.label for I in enumerate_ideals(A, "random", seed=7, count=20)]
    second = [I.label for I in enumerate_ideals(A, "random", seed=7, count=20)]
    assert first == second
    assert len(first) == 20
    for I in enumerate_ideals(A, "random", seed=3, count=10):
        assert 0 < I.dimension < 4


def test_unknown_enumeration_mode(exterior):
    with pytest.raises(ValueError):
        list(enumerate_ideals(algebraize(exterior), "everything"))


def test_dimension_cap(exterior):
    with override_settings(dim_cap=2):
        with pytest.raises(ResourceCapExceeded):
            list(enumerate_ideals(algebraize(exterior)))


@pytest.mark.parametrize("name", ["exterior", "chain", "square-of-max", "dual-numbers"])
def test_oracle_agrees_with_groebner_path(name):
    from verify.fixtures import fixture_ring

    R = fixture_ring(name)
    A = algebraize(R)
    k = residue_field(R)
    for I_fd in enumerate_ideals(A):
        gens = I_fd.ideal_generators
        if not gens:
            continue
        I = ideal(R, *gens)
        assert length(I) == I_fd.dimension
        assert length(socle(I)) == fd_socle_dim(I_fd)
        assert hom_module(I, k).dimension() == fd_hom(I_fd, residue_module(A)).dimension
        assert ext_length(1, I, I) == fd_ext1(I_fd, I_fd)
        assert (rigidity(I).ext1_dimension == 0) == (fd_ext1(I_fd, I_fd) == 0)
        basis, _ = fd_trace(I_fd, regular_module(A))
        assert length(trace_ideal(I).trace) == basis.shape[0]
