"""Transfer-function certificates for optimization methods, consensus
estimators and distributed optimization algorithms.

The universally quantified conditions ("for all small epsilon", "for all
lambda != 0") are checked on recorded sample grids, so every certificate is a
*sampled* certificate: it names the grids and tolerances it used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import StructuralSingularityError
from .ratpoly import RationalFunction, exact, z
import numpy as np

from .stability import (CIRCLE_TOL, STABILITY_MARGIN, is_stable, lambda_grid,
                        pole_report, roots)
from .tfmatrix import PartitionedTransferMatrix, feedthrough, lft_eval, properness_report

DEFAULT_EPS_GRID = tuple(mpq(1, 10**k) for k in range(1, 7))
DEFAULT_RADIUS = 0.3
DEFAULT_PROFILE = "real"
WELLPOSED_TOL = 1e-12
GENERIC_LAMBDAS = (exact("0.1"), exact("0.2+0.1j"), exact("-0.05"))

PASS, FAIL, REFUSED = "pass", "fail", "refused"


def _num(x):
    """JSON-friendly scalar."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return x
    c = complex(x)
    return c.real if c.imag == 0 else [c.real, c.imag]


@dataclass
class Condition:
    id: str
    passed: bool
    evidence: dict = field(default_factory=dict)
    description: str = ""

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed, "description": self.description,
                "evidence": self.evidence}


@dataclass
class Certificate:
    subject: str
    kind: str
    conditions: list
    grids: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    refused_reason: str = ""

    @property
    def verdict(self) -> str:
        if self.refused_reason:
            return REFUSED
        return PASS if all(c.passed for c in self.conditions) else FAIL

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def failed(self) -> list:
        return [c.id for c in self.conditions if not c.passed]

    def __getitem__(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def to_json(self) -> dict:
        out = {
            "subject": self.subject,
            "kind": self.kind,
            "verdict": self.verdict,
            "conditions": [c.to_json() for c in self.conditions],
            "grids": self.grids,
            "tolerances": self.tolerances,
            "sampled": True,
        }
        if self.refused_reason:
            out["refused_reason"] = self.refused_reason
        return out

    def render(self) -> str:
        lines = [f"{self.kind} certificate for {self.subject!r}: {self.verdict.upper()}"]
        if self.refused_reason:
            lines.append(f"  refused: {self.refused_reason}")
        w = max((len(c.id) for c in self.conditions), default=4)
        for c in self.conditions:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {c.id:<{w}}  {mark}  {c.description}")
            if not c.passed:
                for k, v in c.evidence.items():
                    lines.append(f"  {'':<{w}}        {k}: {v}")
        return "\n".join(lines)


def _tolerances() -> dict:
    return {"stability_margin": STABILITY_MARGIN, "circle_tol": CIRCLE_TOL}


def _closed_loop_zeros_ok(h: RationalFunction, eps):
    """Zeros of ``1 - eps*h`` strictly inside the unit disk."""
    num = (h.den - h.num.scale(eps)) if not h.is_zero() else h.den
    if num.degree < 1:
        return True, 0.0
    rep = roots(num)
    return rep.stable, rep.max_modulus


def _pole_at_one_condition(h0: RationalFunction, cid: str) -> Condition:
    k = h0.multiplicity_at_one() if not h0.is_zero() else 0
    integ_ok = k < 0 and is_stable(h0 * (z - 1))
    ev = {"order_at_one": k}
    if k < 0:
        ev["max_pole_modulus_of_(z-1)H"] = pole_report(h0 * (z - 1)).max_modulus
    return Condition(cid, bool(integ_ok), ev,
                     "pole at z=1 and (z-1)*G stable")


def check_optimization_method(g: RationalFunction, eps_grid=None, subject: str = "G_opt") -> Certificate:
    eps_grid = DEFAULT_EPS_GRID if eps_grid is None else tuple(exact(e) for e in eps_grid)
    bad = []
    for eps in eps_grid:
        ok, mod = _closed_loop_zeros_ok(g, eps)
        if not ok:
            bad.append({"eps": _num(eps), "max_zero_modulus": mod})
    conds = [
        Condition("i", not bad, {"failures": bad} if bad else {},
                  "zeros of 1 - eps*G inside the unit circle on the eps grid"),
        _pole_at_one_condition(g, "ii"),
        Condition("iii", g.is_proper(), {"relative_degree": _num(g.relative_degree)},
                  "G proper"),
    ]
    return Certificate(subject, "optimization method", conds,
                       grids={"eps": [_num(e) for e in eps_grid]}, tolerances=_tolerances())


def _lambda_setup(radius, profile, lambdas, generic_lambdas):
    grid = lambda_grid(radius, profile=profile) if lambdas is None else [exact(l) for l in lambdas]
    generic = tuple(exact(l) for l in generic_lambdas)
    grids = {"lambda_profile": profile if lambdas is None else "explicit", "lambda_radius": radius,
             "lambda": [_num(l) for l in grid], "lambda_generic": [_num(l) for l in generic]}
    return grid, generic, grids


def _wellposed(D: np.ndarray, lambdas) -> tuple:
    """Smallest ``|det(I - lam D)|`` over the samples."""
    eye = np.eye(D.shape[0])
    worst = min((abs(np.linalg.det(eye - complex(l) * D)) for l in lambdas), default=1.0)
    return worst > WELLPOSED_TOL, float(worst)


def _acyclic(D: np.ndarray) -> bool:
    """Nilpotent feedthrough: transmissions can be ordered without a loop."""
    return bool(np.allclose(np.linalg.matrix_power(D, D.shape[0]), 0, atol=1e-12))


def _multiplicity_scan(closures) -> list:
    out = []
    for lam, g in closures:
        k = math.inf if g.is_zero() else g.multiplicity_at_one()
        out.append({"lambda": _num(lam), "zeros_at_one": k if k != math.inf else "inf"})
    return out


def check_consensus_estimator(G: PartitionedTransferMatrix, order: int, radius: float = DEFAULT_RADIUS,
                              generic_lambdas=GENERIC_LAMBDAS, profile: str = DEFAULT_PROFILE,
                              lambdas=None, strict: bool = False, subject: str | None = None) -> Certificate:
    """Sampled check that ``G`` is a consensus estimator of the given order.

    Condition (iv) requires a proper ``G`` whose network loop
    ``I - lam * G22`` is well posed at every sampled ``lam``; strict
    properness of ``G22`` is reported, and enforced only with ``strict``.
    """
    subject = subject or G.label or "G_con"
    kind = f"consensus estimator (order {order})"
    grid, generic_lams, grids = _lambda_setup(radius, profile, lambdas, generic_lambdas)
    try:
        closures = [(lam, lft_eval(G, lam)) for lam in grid]
        generic = [(lam, lft_eval(G, lam)) for lam in generic_lams]
    except StructuralSingularityError as exc:
        return Certificate(subject, kind, [], grids, _tolerances(),
                           refused_reason=f"structural singularity at lambda={exc.lam}")

    unstable, worst = [], 0.0
    for lam, g in [(0, G.b11)] + closures:
        rep = pole_report(g)
        worst = max(worst, rep.max_modulus)
        if not rep.stable:
            unstable.append({"lambda": _num(lam), "max_pole_modulus": rep.max_modulus})
    ev1 = {"worst_pole_modulus": worst}
    if unstable:
        ev1["failures"] = unstable
    conds = [Condition("i", not unstable, ev1, "G_lambda stable on the lambda grid (and at lambda=0)")]

    g0 = G.b11
    if g0.is_zero() or g0.multiplicity_at_one() < 0:
        val, ok = None, False
    else:
        val = g0(1)
        ok = val == 1 if g0.exact else abs(complex(val) - 1) < 1e-9
    conds.append(Condition("ii", bool(ok), {"G0(1)": None if val is None else _num(val)}, "G_0(1) = 1"))

    mults = _multiplicity_scan(generic)
    conds.append(Condition("iii", all(m["zeros_at_one"] == order for m in mults),
                           {"order": order, "scan": mults},
                           f"G_lambda has {order} zero(s) at z=1 for lambda != 0"))

    prop = properness_report(G)
    ev4 = prop.to_json()
    ok4 = prop.proper
    if prop.proper:
        D22 = feedthrough(G.b22)
        wp, margin = _wellposed(D22, list(grid) + list(generic_lams))
        ev4.update(network_loop_well_posed=wp, min_abs_det=margin, network_loop_acyclic=_acyclic(D22))
        ok4 = wp and (prop.block22_strict or not strict)
    conds.append(Condition("iv", ok4, ev4, "G proper with a well-posed network loop"
                           + (" and G22 strictly proper" if strict else "")))
    return Certificate(subject, kind, conds, dict(grids, strict=strict), _tolerances())


def check_distributed_algorithm(H: PartitionedTransferMatrix, eps_grid=None, radius: float = DEFAULT_RADIUS,
                                generic_lambdas=GENERIC_LAMBDAS, profile: str = DEFAULT_PROFILE,
                                lambdas=None, strict: bool = False, subject: str | None = None) -> Certificate:
    """Sampled check that ``H`` is a distributed optimization algorithm.

    Condition (i) is evaluated on the full ``eps x ({0} + lambda grid)``
    product.  Condition (iv) asks for a proper ``H`` whose partial closed
    loop ``H22 + eps H21 (1 - eps H11)^-1 H12`` closes well posed through
    every sampled ``lam``; with ``strict`` the strict properness of ``H22``
    and ``H21 H12`` is required as well.
    """
    subject = subject or H.label or "H"
    eps_grid = DEFAULT_EPS_GRID if eps_grid is None else tuple(exact(e) for e in eps_grid)
    grid, generic_lams, grids = _lambda_setup(radius, profile, lambdas, generic_lambdas)
    grids = {"eps": [_num(e) for e in eps_grid], **grids, "strict": strict}
    try:
        closures = [(lam, lft_eval(H, lam)) for lam in grid]
        generic = [(lam, lft_eval(H, lam)) for lam in generic_lams]
    except StructuralSingularityError as exc:
        return Certificate(subject, "distributed algorithm", [], grids, _tolerances(),
                           refused_reason=f"structural singularity at lambda={exc.lam}")
    h0 = H.b11

    bad = []
    for eps in eps_grid:
        for lam, h in [(0, h0)] + closures:
            ok, mod = _closed_loop_zeros_ok(h, eps)
            if not ok:
                bad.append({"eps": _num(eps), "lambda": _num(lam), "max_zero_modulus": mod})
    conds = [Condition("i", not bad, {"failures": bad[:10], "count": len(bad)} if bad else {},
                       "zeros of 1 - eps*H_lambda inside the unit circle on the (eps, lambda) grid")]

    conds.append(_pole_at_one_condition(h0, "ii"))

    unstable, worst = [], 0.0
    for lam, h in closures:
        rep = pole_report(h)
        worst = max(worst, rep.max_modulus)
        if not rep.stable:
            unstable.append({"lambda": _num(lam), "max_pole_modulus": rep.max_modulus})
    mults = _multiplicity_scan(generic)
    ok3 = not unstable and all(m["zeros_at_one"] == "inf" or m["zeros_at_one"] >= 1 for m in mults)
    ev3 = {"worst_pole_modulus": worst, "scan": mults}
    if unstable:
        ev3["failures"] = unstable[:10]
    conds.append(Condition("iii", ok3, ev3, "H_lambda stable with a zero at z=1 for lambda != 0"))

    prop = properness_report(H)
    ev4 = prop.to_json()
    ok4 = prop.proper
    if prop.proper:
        D11 = complex(feedthrough([[h0]])[0, 0])
        D12, D21, D22 = feedthrough([H.b12]), feedthrough([[x] for x in H.b21]), feedthrough(H.b22)
        wp, margin, acyclic = True, math.inf, True
        for eps in eps_grid:
            e = complex(eps)
            if abs(1 - e * D11) <= WELLPOSED_TOL:
                wp, margin = False, 0.0
                break
            P = D22 + e * (D21 @ D12) / (1 - e * D11)
            w, mg = _wellposed(P, list(grid) + list(generic_lams))
            wp, margin = wp and w, min(margin, mg)
            acyclic = acyclic and _acyclic(P)
        ev4.update(network_loop_well_posed=wp, min_abs_det=margin, network_loop_acyclic=acyclic)
        ok4 = wp and (prop.algorithm_ok or not strict)
    conds.append(Condition("iv", ok4, ev4, "H proper with a well-posed partial closed loop"
                           + ("; H22 and H21*H12 strictly proper" if strict else "")))
    return Certificate(subject, "distributed algorithm", conds, grids, _tolerances())


# -- simulation oracle ------------------------------------------------------------

@dataclass(frozen=True)
class OracleScenario:
    """Closed-loop test bench for the convergence definitions."""

    topology: str = "ring"
    n: int = 5
    scale: float = 0.5
    eps: float = 0.01
    targets: tuple | None = None
    T: int = 100_000
    estimator_T: int = 20_000
    tol: float = 1e-6
    seed: int = 0

    def agent_targets(self):
        return tuple(float(k) for k in range(1, self.n + 1)) if self.targets is None else self.targets

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in ("topology", "n", "scale", "eps", "T", "estimator_T", "tol", "seed")}
        out["targets"] = list(self.agent_targets())
        return out


def _signals_of_order(order: int, n: int, seed: int):
    from .netsim import PolynomialSignals
    rng = np.random.default_rng(seed)
    cols = [np.arange(1, n + 1, dtype=float)]
    for k in range(1, order):
        c = rng.uniform(-1, 1, n) * 10.0 ** (-2 * k)
        cols.append(c - c.mean())
    return PolynomialSignals(np.column_stack(cols))


def _traj_evidence(traj, target=None) -> dict:
    ev = {"steps": traj.steps, "diverged": traj.diverged, "converged_at": traj.converged_at,
          "final_y": [float(v) for v in traj.final]}
    if target is not None:
        ev["target"] = float(target)
        ev["final_max_error"] = float(np.max(np.abs(traj.final - target))) if not traj.diverged else math.inf
    return ev


def _settles(traj, tol) -> tuple:
    """Converged to a constant (and, across agents, a common constant)."""
    if traj.diverged:
        return False, {"diverged": True}
    tail = traj.y[-min(100, traj.steps):]
    drift = float(np.max(np.abs(tail - tail[-1])))
    spread = float(np.ptp(traj.final))
    return drift < tol and spread < tol, {"drift": drift, "agent_spread": spread,
                                          "final_y": [float(v) for v in traj.final]}


def oracle_check_definition(subject, kind: str, order: int | None = None,
                            scenario: OracleScenario | None = None, label: str = "") -> Certificate:
    """Simulation cross-check of the convergence definitions.

    ``kind`` is ``"opt-method"``, ``"estimator"`` (needs ``order``) or
    ``"algorithm"``.  A pass means the simulated limits match the definition
    within ``scenario.tol``; it is evidence, not proof.
    """
    from .netsim import (Quadratic, build_network, simulate_consensus, simulate_distributed,
                         simulate_optimization, zero_objective)
    sc = scenario or OracleScenario()
    label = label or getattr(subject, "label", "") or kind
    grids = {"scenario": sc.to_json()}
    tol = {"tol": sc.tol}
    conds = []
    if kind == "opt-method":
        tr = simulate_optimization(subject, Quadratic(sc.eps, [3.0]), sc.T, stop_on_convergence=True)
        ok = not tr.diverged and abs(tr.final[0] - 3.0) < sc.tol
        conds.append(Condition("quadratic", bool(ok), _traj_evidence(tr, 3.0),
                               "y -> y* for f = eps/2 (y - 3)^2"))
        tr0 = simulate_optimization(subject, zero_objective(1), min(sc.T, 5000), initial="impulse", seed=sc.seed)
        ok0, ev0 = _settles(tr0, sc.tol)
        conds.append(Condition("eps_zero", ok0, ev0, "y converges to a constant when f = 0"))
        return Certificate(label, "optimization method (simulated)", conds, grids, tol)

    net = build_network(sc.topology, sc.n, sc.scale, seed=sc.seed)
    if kind == "estimator":
        if order is None:
            raise ValueError("estimator oracle needs an order")
        sig = _signals_of_order(order, sc.n, sc.seed)
        tr = simulate_consensus(subject, net, sig, sc.estimator_T)
        ok = not tr.diverged and float(np.max(np.abs(tr.final - sig.mean))) < sc.tol
        conds.append(Condition("tracking", bool(ok), _traj_evidence(tr, sig.mean),
                               f"y_i -> mean input for degree-{order - 1} inputs with constant mean"))
        return Certificate(label, f"consensus estimator (order {order}, simulated)", conds, grids, tol)

    if kind != "algorithm":
        raise ValueError(f"unknown kind {kind!r}")
    targets = np.array(sc.agent_targets())
    tr = simulate_distributed(subject, net, Quadratic(sc.eps, targets), sc.T, stop_on_convergence=True,
                              record_network=False)
    ok = not tr.diverged and tr.max_error(targets.mean()) < sc.tol
    conds.append(Condition("quadratic", bool(ok), _traj_evidence(tr, targets.mean()),
                           "y_i -> mean of the local minimizers"))
    tr0 = simulate_distributed(subject, net, zero_objective(sc.n), min(sc.T, 20_000), initial="impulse",
                               seed=sc.seed, record_network=False)
    ok0, ev0 = _settles(tr0, sc.tol)
    conds.append(Condition("eps_zero", ok0, ev0, "y_i converge to a common constant when f = 0"))
    return Certificate(label, "distributed algorithm (simulated)", conds, grids, tol)
