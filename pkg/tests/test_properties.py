import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from distdecomp.certify import Certificate, Condition, check_distributed_algorithm, check_optimization_method
from distdecomp.netsim import build_network, markov_from_transfer, realize
from distdecomp.ratpoly import GaussianRational, Polynomial, RationalFunction, canonicalize, rf_arith, z
from distdecomp.stability import allpass_correction, is_minimum_phase, is_stable, roots
from distdecomp.synthesis import cascade, compose, decompose
from distdecomp.tfmatrix import PartitionedTransferMatrix, diag, f_transform, lft_eval
from distdecomp.zoo import catalog_get, eq2_estimator

SETTINGS = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=7).map(mpq)
nonzero_q = small_q.filter(lambda q: q != 0)


@st.composite
def polys(draw, max_deg=3, monic=False):
    d = draw(st.integers(0, max_deg))
    cs = draw(st.lists(small_q, min_size=d, max_size=d)) + [mpq(1) if monic else draw(nonzero_q)]
    return Polynomial(cs)


@st.composite
def rfs(draw, proper=False):
    den = draw(polys(monic=True))
    num = draw(polys(max_deg=den.degree if proper else 3))
    return RationalFunction(num, den)


gauss_points = st.builds(GaussianRational, small_q, small_q)


def _safe(r, p):
    return r.den(p) != 0


@SETTINGS
@given(rfs(), rfs(), gauss_points, st.sampled_from(["add", "sub", "mul", "div"]))
def test_arith_is_pointwise(a, b, p, op):
    assume(_safe(a, p) and _safe(b, p))
    assume(op != "div" or (not b.is_zero() and b(p) != 0))
    r = rf_arith(a, b, op)
    assume(_safe(r, p))
    expected = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y,
                "mul": lambda x, y: x * y, "div": lambda x, y: x / y}[op](a(p), b(p))
    assert r(p) == expected


@SETTINGS
@given(rfs())
def test_canonical_form(r):
    assert canonicalize(canonicalize(r)) == canonicalize(r)
    assert r.den.coeffs[-1] == 1


@SETTINGS
@given(rfs(proper=True), rfs(proper=True))
def test_series_of_product_is_convolution(a, b):
    n = 8
    sa, sb, sab = a.series_coeffs(n), b.series_coeffs(n), (a * b).series_coeffs(n)
    conv = [sum(sa[i] * sb[k - i] for i in range(k + 1)) for k in range(n)]
    assert sab == conv


@SETTINGS
@given(rfs(), st.integers(1, 3))
def test_multiplicity_shift(r, k):
    assume(not r.is_zero())
    assert (r * (z - 1) ** k).multiplicity_at_one() == r.multiplicity_at_one() + k


@SETTINGS
@given(polys(max_deg=5))
def test_root_count(p):
    assert roots(p).degree == p.degree


@SETTINGS
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=1, max_size=3))
def test_allpass_reflection(zs):
    zs = [mpq(x) for x in zs]
    assume(all(abs(abs(float(x)) - 1) > 1e-3 for x in zs))
    r = RationalFunction(Polynomial.from_roots(zs), Polynomial.from_roots([mpq(0)] * (len(zs) + 1)))
    phi, corr = allpass_correction(r)
    assert is_minimum_phase(corr)
    for th in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        assert abs(complex(phi(complex(np.exp(1j * th))))) == pytest.approx(1.0, abs=1e-10)


@SETTINGS
@given(rfs())
def test_stability_invariant_under_canonicalization(r):
    raw = RationalFunction(r.num * (z.num - 3), r.den * (z.num - 3))
    assert is_stable(raw) == is_stable(r)


@st.composite
def estimators(draw):
    g11 = draw(rfs(proper=True))
    g12 = draw(rfs(proper=True))
    g21 = draw(rfs(proper=True))
    g22 = draw(rfs(proper=True)) / z
    return PartitionedTransferMatrix.from_blocks(g11, [g12], [g21], [[g22]])


@SETTINGS
@given(estimators())
def test_lft_at_zero_is_block11(G):
    assert lft_eval(G, 0) == G.b11


@SETTINGS
@given(estimators(), st.lists(gauss_points, min_size=5, max_size=5), rfs())
def test_transform_invariance(G, lams, f):
    assume(not f.is_zero())
    T = f_transform(G, diag(f))
    for lam in lams:
        assume((1 - lam * G.b22[0][0]).num.is_zero() is False)
        assert lft_eval(T, lam) == lft_eval(G, lam)
    assert f_transform(T, diag(1 / f)).entries == G.entries


@SETTINGS
@given(st.lists(st.booleans(), min_size=0, max_size=5))
def test_verdict_is_conjunction(flags):
    cert = Certificate("s", "k", [Condition(str(i), f) for i, f in enumerate(flags)])
    assert cert.passed == all(flags)


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["1/20", "1/10", "1/5", "1/2"]),
       st.sampled_from(["gradient", "proximal", "heavy_ball_opt", "nesterov_opt"]))
def test_composition_with_eq2_squared(alpha, name):
    g = catalog_get(name, alpha=mpq(alpha)).build
    assume(check_optimization_method(g).passed)
    assume(is_minimum_phase(g))
    H = compose(g, cascade(eq2_estimator(), eq2_estimator()))
    assert check_distributed_algorithm(H).passed


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["diging", "extra", "svl", "abn", "nids"]), st.sampled_from(["1/20", "1/10", "3/20"]),
       st.lists(gauss_points, min_size=3, max_size=3))
def test_round_trip_random_params(name, alpha, lams):
    H = catalog_get(name, alpha=mpq(alpha)).build
    back = decompose(H).compose()
    for lam in [mpq(0)] + lams:
        try:
            ref = lft_eval(H, lam)
        except Exception:
            continue
        assert lft_eval(back, lam) == ref


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 9), st.floats(0.1, 3.0), st.integers(0, 1000),
       st.sampled_from(["ring", "complete", "star", "path", "random"]))
def test_network_invariants(n, scale, seed, topo):
    net = build_network(topo, n, scale, seed=seed, density=0.7)
    one = np.ones(n)
    assert np.allclose(net.laplacian @ one, 0, atol=1e-12)
    assert np.allclose(one @ net.laplacian, 0, atol=1e-12)
    assert abs(net.spectral_radius - scale) < 1e-10


@SETTINGS
@given(rfs(proper=True))
def test_realization_markov(r):
    assert np.allclose(realize(r).markov(20), markov_from_transfer(r, 20), atol=1e-8, rtol=1e-8)
