"""Per-agent gradient maps and consensus input signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import AlgebraicLoopError, InputSignalError


@dataclass(frozen=True)
class Quadratic:
    """``f_i(y) = eps/2 * (y - target_i)^2``."""

    eps: float
    targets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.targets.size

    @property
    def optimum(self) -> float:
        return float(np.mean(self.targets))

    def grad(self, y: np.ndarray) -> np.ndarray:
        return self.eps * (y - self.targets)

    def implicit(self, c: np.ndarray, d: float) -> np.ndarray:
        """``u`` solving ``u = grad(c + d*u)``."""
        den = 1.0 - self.eps * d
        if den == 0:
            raise AlgebraicLoopError("implicit gradient step is singular")
        return self.eps * (c - self.targets) / den

    def to_json(self) -> dict:
        return {"type": "quadratic", "eps": self.eps, "targets": self.targets.tolist()}


@dataclass(frozen=True)
class Tanh:
    """Gradient ``eps * tanh(y - target_i)``; not a quadratic, so no implicit solve."""

    eps: float
    targets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.targets.size

    def grad(self, y: np.ndarray) -> np.ndarray:
        return self.eps * np.tanh(y - self.targets)

    def implicit(self, c, d):
        raise AlgebraicLoopError("implicit gradient steps are only solved for quadratic objectives")

    def to_json(self) -> dict:
        return {"type": "tanh", "eps": self.eps, "targets": self.targets.tolist()}


def zero_objective(n: int) -> Quadratic:
    """``f_i = 0`` (a quadratic with ``eps = 0``)."""
    return Quadratic(0.0, np.zeros(n))


@dataclass(frozen=True)
class PolynomialSignals:
    """``w_i(t) = sum_k coeffs[i, k] * t**k`` with a constant agent average."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "coeffs", c)
        drift = c[:, 1:].sum(axis=0)
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.any(np.abs(drift) > 1e-12 * scale * c.shape[0]):
            raise InputSignalError("time-varying coefficients must sum to zero across agents "
                                   "(the average input must be constant)")

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def mean(self) -> float:
        return float(np.mean(self.coeffs[:, 0]))

    def at(self, t: int) -> np.ndarray:
        powers = float(t) ** np.arange(self.coeffs.shape[1])
        return self.coeffs @ powers

    def to_json(self) -> dict:
        return {"type": "polynomial", "coeffs": self.coeffs.tolist()}


def ramp_signals(n: int, seed: int = 0) -> PolynomialSignals:
    """Distinct offsets plus zero-sum slopes, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    offsets = np.arange(1, n + 1, dtype=float)
    slopes = rng.uniform(-0.01, 0.01, n)
    slopes -= slopes.mean()
    return PolynomialSignals(np.column_stack([offsets, slopes]))
