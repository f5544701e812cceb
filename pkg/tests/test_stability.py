import math

import numpy as np
import pytest

from distdecomp.errors import RefusedError
from distdecomp.ratpoly import Polynomial, RationalFunction, exact, z
from distdecomp.stability import (allpass_correction, disk_grid_stability, is_minimum_phase, is_stable,
                                  lambda_grid, pole_report, roots)
from distdecomp.tfmatrix import lft_eval
from distdecomp.zoo import diging_matrix, eq2_estimator


def test_single_root():
    rep = roots(Polynomial([exact("-0.5"), 1]))
    assert rep.stable and rep.roots[0][0] == pytest.approx(0.5)


def test_double_root_on_circle():
    rep = roots(Polynomial([1, -2, 1]))
    assert not rep.stable and rep.on_circle
    assert sum(k for _, k in rep.roots) == 2
    assert all(complex(r) == pytest.approx(1.0) for r, _ in rep.roots)


def test_complex_pair_quadratic_formula():
    rep = roots(Polynomial([exact("0.5"), -1, 1]))
    got = sorted((complex(r) for r, _ in rep.roots), key=lambda c: c.imag)
    assert got[0] == pytest.approx(0.5 - 0.5j) and got[1] == pytest.approx(0.5 + 0.5j)
    assert rep.max_modulus == pytest.approx(math.sqrt(0.5))
    assert rep.stable


def test_constant_has_no_roots():
    assert roots(Polynomial([3])).roots == ()


def test_stability_examples():
    a = exact("0.1")
    assert is_stable((z - 1) * (-a / (z - 1)))
    assert not is_stable(1 / (z - 1))
    assert is_stable(1 / (z - 1 + a))


def test_margin_is_strict():
    just_inside = RationalFunction([1], [-(1 - exact("1e-7")), 1])
    assert is_stable(just_inside)
    at_margin = RationalFunction([1], [-(1 - exact("1e-10")), 1])
    assert not is_stable(at_margin)


def test_allpass_minimum_phase_is_identity():
    r = 1 / (z - exact("0.5"))
    phi, corr = allpass_correction(r)
    assert phi == 1 and corr == r


def test_allpass_reflects_outside_zero():
    r = (z - 2) / (z * (z - exact("0.5")))
    phi, corr = allpass_correction(r)
    assert phi == (1 - 2 * z) / (z - 2)
    assert phi(1) == 1
    assert is_minimum_phase(corr)
    for th in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        assert abs(complex(phi(complex(np.exp(1j * th))))) == pytest.approx(1.0, abs=1e-10)


def test_allpass_refuses_circle_zero():
    r = (z + 1) / (z * (z - exact("0.5")))
    with pytest.raises(RefusedError):
        allpass_correction(r)


def test_eq2_family_grid():
    fam = lambda lam: lft_eval(eq2_estimator(), lam)
    assert not disk_grid_stability(fam, radius=0.5, profile="disk").ok
    worst = disk_grid_stability(fam, radius=0.5, profile="disk")
    assert worst.worst_modulus == pytest.approx(1.5)
    assert disk_grid_stability(fam, radius=0.2, profile="halfdisk").ok


def test_constant_family():
    assert disk_grid_stability(lambda lam: RationalFunction.const(1), radius=0.3).ok


def test_diging_family_halfdisk():
    H = diging_matrix(exact("0.1"))
    rep = disk_grid_stability(lambda lam: lft_eval(H, lam), radius=0.3, profile="halfdisk")
    assert rep.ok
    # companion-matrix oracle on one sample
    lam = exact("0.3")
    poles = np.roots([complex(c) for c in reversed(lft_eval(H, lam).den.coeffs)])
    assert np.max(np.abs(poles)) == pytest.approx(pole_report(lft_eval(H, lam)).max_modulus)


def test_grid_profiles():
    real = lambda_grid(0.3, profile="real")
    assert all(complex(x).imag == 0 and 0 < complex(x).real <= 0.3 for x in real)
    half = lambda_grid(0.3, profile="halfdisk")
    assert all(complex(x).real >= -1e-15 and abs(complex(x)) <= 0.3 * (1 + 1e-5) for x in half)
    # exact points are rationalized with denominators up to 1e6
    disk = lambda_grid(0.3, profile="disk")
    assert any(complex(x).real < 0 for x in disk)
    with pytest.raises(ValueError):
        lambda_grid(0.3, profile="bogus")


def test_root_report_json():
    rep = roots(Polynomial([exact("0.5"), -1, 1]))
    js = rep.to_json()
    assert len(js["roots"]) == 2 and all(len(t) == 3 for t in js["roots"])
