import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tau2pf.scalars import ComplexField, CyclotomicField, cyclotomic_polynomial, make_field

# low degree first
KNOWN_PHI = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
}


@pytest.mark.parametrize("n", sorted(KNOWN_PHI))
def test_cyclotomic_polynomials(n):
    assert cyclotomic_polynomial(n) == KNOWN_PHI[n]


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_omega_is_primitive_root(N):
    F = CyclotomicField(N)
    w = F.omega()
    assert w ** N == F.one
    for k in range(1, N):
        assert w ** k != F.one
    assert abs(complex(w) - cmath.exp(2j * cmath.pi / N)) < 1e-15
    assert w ** -1 * w == F.one


rat = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(N):
    F = CyclotomicField(N)
    return st.lists(rat, min_size=F.degree, max_size=F.degree).map(F.from_poly)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_field_axioms(N):
    @settings(max_examples=40, deadline=None)
    @given(elements(N), elements(N), elements(N))
    def check(x, y, z):
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        if not x.is_zero():
            assert x * x.inverse() == x.field.one
        assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-9 * (1 + abs(complex(x * y)))
    check()


def test_reduction_uses_phi():
    F = CyclotomicField(3)
    # x^2 = -1 - x modulo 1 + x + x^2
    assert F.from_poly([0, 0, 1]) == F.from_poly([-1, -1])


def test_coercions_and_json():
    F = CyclotomicField(4)
    x = F("3/4") + F.omega() * 2
    assert x.rational() is None
    assert F(Fraction(3, 4)).rational() == Fraction(3, 4)
    assert F.from_json(F.to_json(x)) == x
    C = ComplexField(4)
    assert C.from_json(C.to_json(1 + 2j)) == 1 + 2j


def test_make_field():
    assert make_field(3, "exact").exact
    assert not make_field(3, "float").exact
    with pytest.raises(ValueError):
        make_field(3, "quad")


def test_zero_inverse_raises():
    F = CyclotomicField(3)
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()
