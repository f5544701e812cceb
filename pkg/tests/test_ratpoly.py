import cmath

import pytest
from gmpy2 import mpq

from distdecomp.errors import DegreeCapError, ImproperError
from distdecomp.ratpoly import (DEGREE_CAP, GaussianRational, Polynomial, RationalFunction, canonicalize,
                                exact, rf_arith, z)


def test_additive_inverse_is_zero():
    a = 1 / (z - 1)
    assert rf_arith(a, -a, "add").is_zero()


def test_square_of_gradient_step():
    g = -1 / (z - 1)
    assert rf_arith(g, g, "mul") == 1 / (z - 1) ** 2


def test_cancellation_on_multiplication():
    r = rf_arith(z - 1, 1 / ((z - 1) * (z - 2)), "mul")
    assert r == 1 / (z - 2)
    # pointwise check away from the poles
    for p in (mpq(0), mpq(3), GaussianRational(1, 1)):
        lhs = (p - 1) * (1 / ((p - 1) * (p - 2)))
        assert complex(r(p)) == pytest.approx(complex(lhs))


def test_common_factor_cancels():
    r = RationalFunction([-2, 2], [0, -2, 2])
    assert r == 1 / z
    assert r.den.coeffs[-1] == 1


def test_already_canonical_proper_step():
    r = -exact("0.1") * z / (z - 1)
    assert list(r.num.coeffs) == [0, mpq(-1, 10)]
    assert list(r.den.coeffs) == [-1, 1]


def test_float_cancellation_within_tolerance():
    num = Polynomial([-0.5000000001, 1.0])
    den = Polynomial([1.0, -2.5, 1.0])  # (z - 0.5)(z - 2)
    r = RationalFunction(num, den, tol=1e-6)
    assert r.den.degree == 1 and r.num.degree == 0
    assert complex(r.poles()[0]).real == pytest.approx(2.0)


def test_float_near_cancellation_kept_at_default_tolerance():
    num = Polynomial([-0.50001, 1.0])
    den = Polynomial([1.0, -2.5, 1.0])
    assert RationalFunction(num, den).den.degree == 2


def test_canonicalize_idempotent():
    r = (z ** 2 - 1) / (2 * z ** 2 - 2 * z)
    assert canonicalize(canonicalize(r)) == canonicalize(r)


@pytest.mark.parametrize("r, k", [
    (-exact("0.1") / (z - 1), -1),
    ((z - 1) ** 2 / (z - exact("0.5")), 2),
    (RationalFunction.const(1), 0),
])
def test_multiplicity_at_one(r, k):
    assert r.multiplicity_at_one() == k


def test_series_of_delay():
    assert (1 / z).series_coeffs(4) == [0, 1, 0, 0]


def test_series_by_long_division():
    assert (-1 / (z - 1)).series_coeffs(5) == [0, -1, -1, -1, -1]


def test_series_geometric():
    assert (z / (z - exact("0.5"))).series_coeffs(4) == [1, mpq(1, 2), mpq(1, 4), mpq(1, 8)]


def test_series_of_improper_raises():
    with pytest.raises(ImproperError):
        (z ** 2 / (z - 1)).series_coeffs(3)


def test_division_by_zero_function():
    with pytest.raises(ZeroDivisionError):
        rf_arith(z, 0 * z, "div")


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        Polynomial([0] * DEGREE_CAP + [0, 1])


def test_degree_of_product():
    p, q = Polynomial([1, 2, 3]), Polynomial([5, 0, 0, 7])
    assert (p * q).degree == p.degree + q.degree


def test_relative_degree_and_properness():
    assert (1 / (z - 1)).relative_degree == 1
    assert (z / (z - 1)).is_proper() and not (z / (z - 1)).is_strictly_proper()
    assert not (z ** 2 / (z - 1)).is_proper()


def test_exact_parses_decimals_and_complex():
    assert exact("0.1") == mpq(1, 10)
    assert exact(0.1) == mpq(1, 10)
    g = exact("0.2+0.1j")
    assert isinstance(g, GaussianRational) and complex(g) == 0.2 + 0.1j


def test_gaussian_rational_field_ops():
    a, b = GaussianRational(mpq(1, 3), mpq(1, 7)), GaussianRational(2, -1)
    assert complex(a * b / b) == pytest.approx(complex(a))
    assert (a - a) == 0
    assert complex(a.conjugate()) == complex(a).conjugate()


def test_json_round_trip_exact_and_float():
    r = (exact("0.1") * z - exact("1/3")) / (z ** 2 - z + exact("0.5"))
    assert RationalFunction.from_json(r.to_json()) == r
    f = r.to_float()
    g = RationalFunction.from_json(f.to_json())
    assert not g.exact and cmath.isclose(complex(g(0.3)), complex(r(mpq(3, 10))))


def test_json_format_uses_ratio_strings():
    obj = (-exact("0.1") / (z - 1)).to_json()
    assert obj == {"num": ["-1/10"], "den": ["-1", "1"]}
