from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from engine.arith import FieldSpec, Scalar, invert, scalar_arithmetic
from engine.errors import FieldMismatchError, ZeroDivisionInFieldError

PRIMES = [2, 3, 5, 7, 101, 32003]


def test_prime_field_canonical_forms():
    F5 = FieldSpec.prime(5)
    assert F5.canon(7) == 2
    assert F5.canon(-1) == 4
    assert F5.canon(Fraction(1, 2)) == 3
    assert str(F5) == "F5"


def test_rationals_render():
    Q = FieldSpec.rationals()
    assert Q.render(Fraction(-3, 6)) == "-1/2"
    assert Q.render(Fraction(4, 2)) == "2"
    assert str(Q) == "Q"


def test_invalid_characteristic():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)
    with pytest.raises(ValueError):
        FieldSpec("rationals", 3)


def test_denominator_vanishing_mod_p():
    with pytest.raises(ZeroDivisionInFieldError):
        FieldSpec.prime(3).canon(Fraction(1, 3))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionInFieldError):
        invert(Scalar(0, FieldSpec.prime(7)))
    with pytest.raises(ZeroDivisionInFieldError):
        Scalar(Fraction(1), FieldSpec.rationals()) / Scalar(0, FieldSpec.rationals())


def test_mixed_fields_rejected():
    a = Scalar(1, FieldSpec.prime(5))
    b = Scalar(1, FieldSpec.prime(7))
    with pytest.raises(FieldMismatchError):
        scalar_arithmetic(a, b, "add")
    with pytest.raises(FieldMismatchError):
        a * b


def test_unknown_operation():
    a = Scalar(1, FieldSpec.prime(5))
    with pytest.raises(ValueError):
        scalar_arithmetic(a, a, "pow")


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_ring_laws(p, a, b, c):
    F = FieldSpec.prime(p)
    x, y, z = Scalar(a, F), Scalar(b, F), Scalar(c, F)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x - x).is_zero()


@given(st.sampled_from(PRIMES), st.integers().filter(lambda n: n != 0))
def test_prime_field_inverses(p, a):
    F = FieldSpec.prime(p)
    x = Scalar(a, F)
    if x.is_zero():
        return
    assert x * invert(x) == Scalar(1, F)


@given(st.fractions(), st.fractions().filter(lambda q: q != 0))
def test_rational_division_is_exact(a, b):
    Q = FieldSpec.rationals()
    assert scalar_arithmetic(scalar_arithmetic(Scalar(a, Q), Scalar(b, Q), "div"), Scalar(b, Q), "mul") == Scalar(a, Q)
