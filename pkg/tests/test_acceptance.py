"""End-to-end acceptance checks.

Each check records a one-line PASS/FAIL summary; the lines are printed at the
end of the session by the terminal-summary hook in ``conftest.py``.
"""

import time

import numpy as np
import pytest

from distdecomp.certify import (FAIL, PASS, check_consensus_estimator, check_distributed_algorithm,
                                check_optimization_method, oracle_check_definition)
from distdecomp.netsim import (Quadratic, Tanh, build_network, eigen_decoupling, internal_state_probe,
                               ramp_signals, simulate_consensus, simulate_distributed)
from distdecomp.ratpoly import RationalFunction, exact, z
from distdecomp.stability import is_minimum_phase
from distdecomp.synthesis import (compose, decompose, round_trip_lambdas, search_factoring_transform,
                                  composition_side_condition, try_factor)
from distdecomp.tfmatrix import PartitionedTransferMatrix, diag, f_transform, lft_eval
from distdecomp.zoo import (ALGORITHMS, OPT_METHODS, ORDER2_ESTIMATORS, catalog_get, catalog_names,
                            diging_matrix, eq2_estimator)

from conftest import ACCEPTANCE

TARGETS = np.arange(1.0, 6.0)
A = exact("1/10")


def report(number, title, ok, detail):
    ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    print("\n" + ACCEPTANCE[number])
    assert ok, ACCEPTANCE[number]


@pytest.fixture(scope="module")
def ring5():
    return build_network("ring", 5, 0.5)


def test_criterion_01_diging_decomposition():
    t0 = time.perf_counter()
    H = catalog_get("diging", alpha=A).build
    dec = decompose(H)
    G = f_transform(dec.g_con, diag(z, -A * z / (z - 1)))
    fac = try_factor(G, (1, 1))
    elapsed = time.perf_counter() - t0
    eq2 = eq2_estimator().entries
    ok = (dec.g_opt == -A / (z - 1) and fac.g_con1.entries == eq2 and fac.g_con2.entries == eq2
          and fac.rebuild().entries == G.entries and elapsed < 1.0)
    report(1, "DIGing decomposition", ok, f"g_opt={dec.g_opt}, factors exact, {elapsed:.3f}s")


def test_criterion_02_catalog_certificates():
    t0 = time.perf_counter()
    failures = []
    for name in ALGORITHMS:
        entry = catalog_get(name)
        if not check_distributed_algorithm(entry.build).passed:
            failures.append(name)
        g_opt, *cons = entry.factors
        if not check_optimization_method(g_opt).passed:
            failures.append(f"{name}:g_opt")
        orders = [2] if len(cons) == 1 else [1, 1]
        for con, order in zip(cons, orders):
            if not check_consensus_estimator(con, order).passed:
                failures.append(f"{name}:g_con")
    for name in ORDER2_ESTIMATORS:
        if not check_consensus_estimator(catalog_get(name).build, 2).passed:
            failures.append(name)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30
    report(2, "catalog certificates", ok,
           f"{len(ALGORITHMS)} algorithms with factors, {len(ORDER2_ESTIMATORS)} estimators, "
           f"failures={failures}, {elapsed:.2f}s")


def test_criterion_03_round_trip():
    lams = round_trip_lambdas()
    assert len(lams) == 7 and lams[0] == 0
    bad = []
    for name in ALGORITHMS:
        H = catalog_get(name).build
        back = decompose(H).compose()
        if any(lft_eval(back, lam) != lft_eval(H, lam) for lam in lams):
            bad.append(name)
    report(3, "round trip", not bad, f"{len(ALGORITHMS)} algorithms x 7 points, mismatches={bad}")


def test_criterion_04_cross_product():
    opts = [n for n in OPT_METHODS
            if is_minimum_phase(catalog_get(n).build) and check_optimization_method(catalog_get(n).build).passed]
    tried, bad = 0, []
    for o in opts:
        g = catalog_get(o).build
        for e in ORDER2_ESTIMATORS:
            G = catalog_get(e).build
            if not composition_side_condition(g, G):
                continue
            tried += 1
            if not check_distributed_algorithm(compose(g, G)).passed:
                bad.append((o, e))
    report(4, "minimum-phase x order-2 cross product", tried > 0 and not bad,
           f"{tried} admissible pairs from {len(opts)} methods, failures={bad}")


def test_criterion_05_convergence(ring5):
    errors = {}
    for name in ALGORITHMS:
        tr = simulate_distributed(catalog_get(name).build, ring5, Quadratic(0.01, TARGETS), 100_000,
                                  stop_on_convergence=True, record_network=False)
        errors[name] = tr.max_error(3.0)
    worst = max(errors, key=errors.get)
    report(5, "convergence on ring(5)", errors[worst] < 1e-6, f"worst {worst} error {errors[worst]:.2e}")


def test_criterion_06_decomposition_equivalence(ring5):
    devs = {}
    obj = Tanh(0.01, TARGETS)
    # the shifted variant has q = 1, so the rebuilt matrix differs from H
    shifted = f_transform(catalog_get("diging").build, diag(z, z)).with_label("diging_shifted", "H")
    cases = {"diging": catalog_get("diging").build, "svl": catalog_get("svl").build, "diging_shifted": shifted}
    for name, H in cases.items():
        a = simulate_distributed(H, ring5, obj, 10_000, record_network=False)
        b = simulate_distributed(decompose(H).compose(), ring5, obj, 10_000, record_network=False)
        devs[name] = float(np.max(np.abs(a.y - b.y)))
    ok = all(d < 1e-8 for d in devs.values())
    report(6, "equivalence under tanh gradients", ok,
           ", ".join(f"{k} max deviation {v:.1e}" for k, v in devs.items()))


def test_criterion_07_order_separation(ring5):
    sig = ramp_signals(5, seed=0)
    errors = {}
    for name in ORDER2_ESTIMATORS:
        tr = simulate_consensus(catalog_get(name).build, ring5, sig, 20_000)
        errors[name] = float(np.max(np.abs(tr.y[-1000:] - sig.mean)))
    tr = simulate_consensus(eq2_estimator(), ring5, sig, 20_000)
    first_order = float(np.min(np.max(np.abs(tr.y[-1000:] - sig.mean), axis=1)))
    worst = max(errors, key=errors.get)
    ok = errors[worst] < 1e-6 and first_order > 1e-3
    report(7, "order separation on ramps", ok,
           f"worst order-2 ({worst}) {errors[worst]:.1e}, order-1 floor {first_order:.2e}")


def test_criterion_08_internal_stability(ring5):
    dec = decompose(catalog_get("diging").build)
    fac = search_factoring_transform(dec.g_con).factoring
    pr = internal_state_probe(dec, fac, ring5, Quadratic(0.01, TARGETS), 30_000, fit_window=10_000)
    ok = pr.growth_r2 > 0.999 and pr.y_deviation < 1e-8 and pr.factored_bound < 1e3
    report(8, "internal stability", ok,
           f"R2={pr.growth_r2:.6f}, factored bound {pr.factored_bound:.1f}, y deviation {pr.y_deviation:.1e}")


def test_criterion_09_eigen_decoupling(ring5):
    devs = {n: eigen_decoupling(catalog_get(n).build, ring5, Quadratic(0.01, TARGETS), 3000).max_deviation
            for n in ALGORITHMS}
    worst = max(devs, key=devs.get)
    report(9, "eigen-decoupling", devs[worst] < 1e-8, f"worst {worst} {devs[worst]:.1e}")


def _h11_zero():
    H = catalog_get("diging").build
    rows = [list(r) for r in H.entries]
    rows[0][0] = RationalFunction.const(0)
    return PartitionedTransferMatrix(tuple(map(tuple, rows)), "diging_h11_zero", "H")


def test_criterion_10_oracle_agreement():
    cases = []
    for name in catalog_names():
        e = catalog_get(name)
        cases.append((name, e.build, e.kind, e.order, PASS))
    cases += [
        ("negative stepsize", diging_matrix(exact("-1/10")), "algorithm", None, FAIL),
        ("first order as second", eq2_estimator(), "estimator", 2, FAIL),
        ("zero H11", _h11_zero(), "algorithm", None, FAIL),
    ]
    disagree = []
    for label, subject, kind, order, expected in cases:
        if kind == "algorithm":
            cert = check_distributed_algorithm(subject)
        elif kind == "estimator":
            cert = check_consensus_estimator(subject, order)
        else:
            cert = check_optimization_method(subject)
        oracle = oracle_check_definition(subject, kind, order)
        if not (cert.verdict == oracle.verdict == expected):
            disagree.append(label)
    report(10, "certifier/oracle agreement", not disagree,
           f"{len(cases)} cases, disagreements={disagree}")
