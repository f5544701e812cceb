"""Closed-loop simulation of the optimization, consensus and distributed
interconnections, plus the internal-state and eigen-decoupling probes."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import AlgebraicLoopError, NetworkError
from ..ratpoly import RationalFunction
from ..tfmatrix import PartitionedTransferMatrix, lft_eval
from .network import Network
from .objectives import PolynomialSignals, Quadratic
from .realize import StateSpace, append, identity, realize, series, static

DIVERGENCE_BOUND = 1e15
CONVERGENCE_RTOL = 1e-12
CONVERGENCE_WINDOW = 100


@dataclass
class Trajectory:
    """Per-agent time series; arrays are indexed ``[t, agent, ...]``."""

    y: np.ndarray
    u: np.ndarray
    z: np.ndarray | None = None
    v: np.ndarray | None = None
    internal: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    converged_at: int | None = None
    diverged: bool = False

    @property
    def steps(self) -> int:
        return self.y.shape[0]

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]

    def max_error(self, target) -> float:
        return float(np.max(np.abs(self.final - target)))

    def summary(self, target=None) -> dict:
        out = {"steps": self.steps, "converged_at": self.converged_at, "diverged": self.diverged,
               "final_y": self.final.tolist()}
        if target is not None:
            out["target"] = float(target)
            out["final_max_error"] = self.max_error(target)
        return out

    def rows(self, every: int = 1):
        """``(t, agent, channel, value)`` records in time order."""
        chans = [("y", self.y), ("u", self.u)]
        for name, arr in (("z", self.z), ("v", self.v)):
            if arr is not None:
                for k in range(arr.shape[2]):
                    chans.append((f"{name}{k + 1}", arr[:, :, k]))
        for name, arr in self.internal.items():
            for k in range(arr.shape[2]):
                chans.append((f"{name}{k + 1}", arr[:, :, k]))
        for t in range(0, self.steps, every):
            for i in range(self.y.shape[1]):
                for name, arr in chans:
                    yield t, i, name, float(arr[t, i])

    def to_csv(self, every: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "agent", "channel", "value"])
        for t, i, name, val in self.rows(every):
            w.writerow([t, i, name, repr(val)])
        return buf.getvalue()


def _blocks(P: StateSpace, m: int):
    C, D, B = P.C, P.D, P.B
    return dict(Cy=C[:1], Cz=C[1:], D11=float(D[0, 0]), D12=D[0, 1:], D21=D[1:, 0], D22=D[1:, 1:],
                Bu=B[:, 0], Bv=B[:, 1:])


class _NetworkSolver:
    """``v = L (z0 + v D22^T)`` for all agents at once (``v``, ``z0`` are ``n x m``)."""

    def __init__(self, L: np.ndarray, D22: np.ndarray):
        self.L = L
        self.plain = not np.any(D22)
        if self.plain:
            return
        n, m = L.shape[0], D22.shape[0]
        if np.allclose(L, L.T, atol=1e-14):
            lam, Q = np.linalg.eigh(L)
            self.Q = Q
            self.M = np.array([lk * np.linalg.inv(np.eye(m) - lk * D22.T) for lk in lam])
            self.kron = None
        else:
            K = np.eye(n * m) - np.kron(L, D22)
            self.kron = np.linalg.solve(K, np.kron(L, np.eye(m)))

    def __call__(self, z0: np.ndarray) -> np.ndarray:
        if self.plain:
            return self.L @ z0
        if self.kron is not None:
            return (self.kron @ z0.reshape(-1)).reshape(z0.shape)
        zt = self.Q.T @ z0
        return self.Q @ np.einsum("ki,kij->kj", zt, self.M)


def run_loop(P: StateSpace, m: int, L: np.ndarray, T: int, objective=None, signals=None,
             x0=None, probe=(), stop_on_convergence: bool = False, record_network: bool = True,
             rtol: float = CONVERGENCE_RTOL, window: int = CONVERGENCE_WINDOW) -> Trajectory:
    """Simulate ``n`` copies of ``P`` coupled through ``v = (L kron I_m) z``.

    ``P`` has inputs ``(local, v)`` and outputs ``(local, z)``.  With an
    ``objective`` the local input is the gradient of the local output
    (distributed/optimization loop); with ``signals`` it is the exogenous
    estimator input.  ``probe`` names state labels to record.
    """
    n = L.shape[0]
    if (objective is None) == (signals is None):
        raise ValueError("give exactly one of objective or signals")
    if objective is not None and objective.n != n:
        raise ValueError(f"objective is defined for {objective.n} agents, network has {n}")
    if signals is not None and signals.n != n:
        raise ValueError(f"signals are defined for {signals.n} agents, network has {n}")
    b = _blocks(P, m)
    A_T = P.A.T
    Cy, Cz = b["Cy"][0], b["Cz"]
    D11, D12, D21, D22 = b["D11"], b["D12"], b["D21"], b["D22"]
    Bu, Bv = b["Bu"], b["Bv"]
    solve_net = _NetworkSolver(L, D22) if m else None
    feedback = objective is not None
    explicit_u_first = not np.any(D12) or m == 0
    if feedback and m and np.any(D21) and np.any(D12):
        if not isinstance(objective, Quadratic):
            raise AlgebraicLoopError("gradient and network channels form an algebraic loop "
                                     "(H21 and H12 both have feedthrough); only quadratic objectives "
                                     "are solved implicitly")
        joint = _joint_quadratic_solver(L, objective, D11, D12, D21, D22)
    else:
        joint = None
    if feedback and D11 != 0 and not isinstance(objective, Quadratic):
        raise AlgebraicLoopError("the optimization loop has direct feedthrough; only quadratic "
                                 "objectives are solved implicitly")

    X = np.zeros((n, P.nx)) if x0 is None else np.array(x0, dtype=float).reshape(n, P.nx)
    Y = np.empty((T, n))
    U = np.empty((T, n))
    Z = np.empty((T, n, m)) if record_network else None
    V = np.empty((T, n, m)) if record_network else None
    probes = {lab: P.states(lab) for lab in probe}
    internal = {lab: np.empty((T, n, len(ix))) for lab, ix in probes.items()}
    zeros_m = np.zeros((n, m))
    converged_at, diverged, t_end = None, False, T

    for t in range(T):
        for lab, ix in probes.items():
            internal[lab][t] = X[:, ix]
        cy = X @ Cy
        if joint is not None:
            u, v = joint(cy, X @ Cz.T)
            z = X @ Cz.T + np.outer(u, D21) + v @ D22.T
            y = cy + D11 * u + v @ D12
        elif not feedback:
            u = signals.at(t)
            if m:
                z0 = X @ Cz.T + np.outer(u, D21)
                v = solve_net(z0)
                z = z0 + v @ D22.T
            else:
                v = z = zeros_m
            y = cy + D11 * u + (v @ D12 if m else 0.0)
        elif explicit_u_first:
            u = objective.grad(cy) if D11 == 0 else objective.implicit(cy, D11)
            y = cy + D11 * u
            if m:
                z0 = X @ Cz.T + np.outer(u, D21)
                v = solve_net(z0)
                z = z0 + v @ D22.T
            else:
                v = z = zeros_m
        else:
            z0 = X @ Cz.T
            v = solve_net(z0)
            z = z0 + v @ D22.T
            c = cy + v @ D12
            u = objective.grad(c) if D11 == 0 else objective.implicit(c, D11)
            y = c + D11 * u
        Y[t], U[t] = y, u
        if record_network:
            Z[t], V[t] = z, v
        X = X @ A_T + np.outer(u, Bu) + (v @ Bv.T if m else 0.0)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > DIVERGENCE_BOUND:
            diverged, t_end = True, t + 1
            break
        if stop_on_convergence and t >= window:
            scale = max(1.0, float(np.max(np.abs(y))))
            if np.max(np.abs(y - Y[t - window])) < rtol * scale:
                converged_at, t_end = t, t + 1
                break

    traj = Trajectory(Y[:t_end], U[:t_end], Z[:t_end] if record_network else None,
                      V[:t_end] if record_network else None,
                      {k: a[:t_end] for k, a in internal.items()}, {}, converged_at, diverged)
    return traj


def _joint_quadratic_solver(L, objective: Quadratic, D11, D12, D21, D22):
    """Solve the coupled gradient/network feedthrough for quadratic gradients.

    Unknowns ``u`` (n) and ``v`` (n x m, row-major) satisfy
    ``u = eps (cy + D11 u + v D12 - target)`` and
    ``v = L (cz + u D21^T + v D22^T)``.
    """
    n, m = L.shape[0], D22.shape[0]
    eps = objective.eps
    N = n + n * m
    K = np.zeros((N, N))
    K[:n, :n] = np.eye(n) * (1 - eps * D11)
    K[:n, n:] = -eps * np.kron(np.eye(n), D12[None, :])
    K[n:, :n] = -np.kron(L, D21[:, None])
    K[n:, n:] = np.eye(n * m) - np.kron(L, D22)
    Kinv = np.linalg.inv(K)
    Lk = np.kron(L, np.eye(m))

    def solve(cy, cz):
        rhs = np.concatenate([eps * (cy - objective.targets), Lk @ cz.reshape(-1)])
        sol = Kinv @ rhs
        return sol[:n], sol[n:].reshape(n, m)
    return solve


# -- public entry points -----------------------------------------------------------

def _laplacian(network, n: int) -> np.ndarray:
    if network is None:
        return np.zeros((n, n))
    if isinstance(network, Network):
        return network.laplacian
    return np.asarray(network, dtype=float)


def _initial(x0, n, P: StateSpace, seed=None):
    """``None``/``"zero"``, ``"random"`` (any state) or ``"impulse"``.

    ``"impulse"`` is the state left by a random one-step kick on the gradient
    input, i.e. a start reachable through the gradient channel, the way real
    iterations seed their trackers from an initial gradient evaluation.
    """
    if x0 is None or (isinstance(x0, str) and x0 == "zero"):
        return None
    if isinstance(x0, str):
        rng = np.random.default_rng(seed)
        if x0 == "random":
            return rng.standard_normal((n, P.nx))
        if x0 == "impulse":
            return np.outer(rng.standard_normal(n), P.B[:, 0])
        raise ValueError(f"unknown initial state mode {x0!r}")
    return x0


def simulate_distributed(H, network, objective, T: int, initial=None, stop_on_convergence: bool = False,
                         probe=(), seed: int | None = None, record_network: bool = True) -> Trajectory:
    """Aggregated loop ``u = grad f(y)``, ``v = (L kron I_m) z`` around ``H``.

    ``H`` may be a partitioned transfer matrix or an already realized
    :class:`StateSpace` with ``1+m`` inputs and outputs.  ``network=None``
    runs every agent in isolation (``L = 0``).
    """
    P = H if isinstance(H, StateSpace) else realize(H)
    m = P.n_in - 1
    n = objective.n
    L = _laplacian(network, n)
    if L.shape != (n, n):
        raise NetworkError(f"network has {L.shape[0]} agents, objective {n}")
    traj = run_loop(P, m, L, T, objective=objective, x0=_initial(initial, n, P, seed), probe=probe,
                    stop_on_convergence=stop_on_convergence, record_network=record_network)
    traj.meta.update(kind="distributed", label=getattr(H, "label", ""), objective=objective.to_json(),
                     network=network.to_json() if isinstance(network, Network) else None, T=T)
    return traj


def simulate_consensus(G, network: Network, signals: PolynomialSignals, T: int,
                       stop_on_convergence: bool = False) -> Trajectory:
    """Estimator ``G`` driven by per-agent polynomial inputs; ``y`` estimates their mean."""
    if not isinstance(signals, PolynomialSignals):
        signals = PolynomialSignals(signals)
    P = G if isinstance(G, StateSpace) else realize(G)
    traj = run_loop(P, P.n_in - 1, _laplacian(network, signals.n), T, signals=signals,
                    stop_on_convergence=stop_on_convergence)
    traj.meta.update(kind="consensus", label=getattr(G, "label", ""), signals=signals.to_json(),
                     target=signals.mean, T=T)
    return traj


def simulate_optimization(g: RationalFunction, objective, T: int, initial=None,
                          stop_on_convergence: bool = False, seed: int | None = None) -> Trajectory:
    """Single loop ``y = G_opt u``, ``u = grad f(y)``."""
    P = realize(g)
    n = objective.n
    traj = run_loop(P, 0, np.zeros((n, n)), T, objective=objective,
                    x0=_initial(initial, n, P, seed), stop_on_convergence=stop_on_convergence,
                    record_network=False)
    traj.meta.update(kind="optimization", objective=objective.to_json(), T=T)
    return traj


# -- arrangements of a decomposed algorithm -------------------------------------------

def _perm(order, size) -> np.ndarray:
    """Static map whose output k is input ``order[k]``."""
    M = np.zeros((size, size))
    for k, j in enumerate(order):
        M[k, j] = 1.0
    return M


def unfactored_system(g_opt: RationalFunction, g_con: PartitionedTransferMatrix) -> StateSpace:
    """``u -> G_opt -> G_con``: the optimization method first."""
    m = g_con.m
    front = append(realize(g_opt).labelled("opt"), identity(m))
    return series(front, realize(g_con).labelled("con"))


def factored_system(g_opt: RationalFunction, g_con1: PartitionedTransferMatrix,
                    g_con2: PartitionedTransferMatrix) -> StateSpace:
    """``u -> G_con2 -> G_opt -> G_con1`` with network inputs ordered ``(v1, v2)``."""
    m1, m2 = g_con1.m, g_con2.m
    size = 1 + m1 + m2
    # inputs (u, v1, v2) -> (u, v2, v1)
    pre = static(_perm([0, *range(1 + m1, size), *range(1, 1 + m1)], size))
    stage1 = append(realize(g_con2).labelled("con2"), identity(m1))         # -> (r, z2, v1)
    route = static(_perm([0, *range(1 + m2, size), *range(1, 1 + m2)], size))  # -> (r, v1, z2)
    stage2 = append(realize(g_opt).labelled("opt"), identity(m1 + m2))      # -> (w, v1, z2)
    stage3 = append(realize(g_con1).labelled("con1"), identity(m2))         # -> (y, z1, z2)
    P = pre
    for s in (stage1, route, stage2, stage3):
        P = series(P, s)
    return P


@dataclass
class ProbeResult:
    unfactored: Trajectory
    factored: Trajectory
    y_deviation: float
    growth_slope: np.ndarray
    growth_r2: float
    factored_bound: float

    def to_json(self) -> dict:
        return {"y_max_deviation": self.y_deviation, "unfactored_slope": self.growth_slope.tolist(),
                "unfactored_r2": self.growth_r2, "factored_internal_max_abs": self.factored_bound,
                "unfactored_internal_final_max_abs": float(np.max(np.abs(self.unfactored.internal["opt"][-1])))}


def linear_fit_r2(series_: np.ndarray) -> tuple:
    """Least-squares line through each column; returns ``(slopes, min R^2)``."""
    s = np.asarray(series_, dtype=float)
    if s.ndim == 1:
        s = s[:, None]
    t = np.arange(s.shape[0], dtype=float)
    slopes, r2s = [], []
    for col in s.T:
        a, b = np.polyfit(t, col, 1)
        resid = col - (a * t + b)
        tot = np.sum((col - col.mean()) ** 2)
        slopes.append(a)
        r2s.append(1.0 - np.sum(resid ** 2) / tot if tot > 0 else 1.0)
    return np.array(slopes), float(min(r2s))


def internal_state_probe(decomposition, factoring, network: Network, objective, T: int,
                         fit_window: int = 10_000) -> ProbeResult:
    """Run both arrangements of a decomposed algorithm and record the optimization state.

    ``decomposition`` supplies ``G_opt`` and ``G_con`` (unfactored arrangement);
    ``factoring`` supplies ``G_con1`` and ``G_con2`` (factored arrangement).
    """
    P1 = unfactored_system(decomposition.g_opt, decomposition.g_con)
    P2 = factored_system(decomposition.g_opt, factoring.g_con1, factoring.g_con2)
    t1 = simulate_distributed(P1, network, objective, T, probe=("opt",))
    t2 = simulate_distributed(P2, network, objective, T, probe=("opt",))
    dev = float(np.max(np.abs(t1.y - t2.y)))
    tail = t1.internal["opt"][-fit_window:]
    tail = tail.reshape(tail.shape[0], -1)
    # agents whose steady gradient vanishes have no drift to fit
    spread = np.ptp(tail, axis=0)
    moving = [k for k in range(tail.shape[1]) if spread[k] > 1e-6 * max(1.0, float(spread.max()))]
    slopes, r2 = linear_fit_r2(tail[:, moving]) if moving else (np.zeros(0), 1.0)
    bound = float(np.max(np.abs(t2.internal["opt"])))
    return ProbeResult(t1, t2, dev, slopes, r2, bound)


# -- eigen-decoupling ----------------------------------------------------------------

@dataclass
class DecouplingReport:
    eigenvalues: np.ndarray
    deviations: np.ndarray

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviations))

    def to_json(self) -> dict:
        return {"eigenvalues": self.eigenvalues.tolist(), "deviations": self.deviations.tolist(),
                "max_deviation": self.max_deviation}


def scalar_loop(h: RationalFunction, eps: float, target: float, T: int) -> np.ndarray:
    """``y = h u``, ``u = eps (y - target)`` from zero state."""
    return simulate_optimization(h, Quadratic(eps, [target]), T).y[:, 0]


def eigen_decoupling(H: PartitionedTransferMatrix, network: Network, objective: Quadratic, T: int,
                     zero_tol: float = 1e-12) -> DecouplingReport:
    """Compare eigenvector projections of the aggregated run with scalar ``H_lambda`` loops."""
    lam, Q = network.eigh()
    agg = simulate_distributed(H, network, objective, T, record_network=False)
    proj = agg.y @ Q
    c = Q.T @ objective.targets
    devs = []
    for k, lk in enumerate(lam):
        lk_exact = Fraction(0) if abs(lk) < zero_tol else Fraction(float(lk))
        h = lft_eval(H, lk_exact)
        ref = scalar_loop(h, objective.eps, c[k], T)
        devs.append(float(np.max(np.abs(proj[:, k] - ref))))
    return DecouplingReport(lam, np.array(devs))
