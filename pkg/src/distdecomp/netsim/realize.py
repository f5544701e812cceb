"""State-space realizations of transfer objects and their interconnection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ImproperError
from ..ratpoly import Polynomial, RationalFunction, poly_gcd
from ..tfmatrix import PartitionedTransferMatrix


@dataclass(frozen=True)
class StateSpace:
    """``x+ = A x + B u``, ``y = C x + D u`` with optional state labels."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    state_labels: tuple = field(default=())

    def __post_init__(self):
        nx = self.A.shape[0]
        if self.B.shape[0] != nx or self.C.shape[1] != nx or self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError("inconsistent state-space dimensions")
        if not self.state_labels:
            object.__setattr__(self, "state_labels", ("",) * nx)

    @property
    def nx(self) -> int:
        return self.A.shape[0]

    @property
    def n_in(self) -> int:
        return self.B.shape[1]

    @property
    def n_out(self) -> int:
        return self.C.shape[0]

    def markov(self, count: int) -> np.ndarray:
        """Impulse response ``[D, CB, CAB, ...]`` with shape ``(count, n_out, n_in)``."""
        out = [self.D]
        AkB = self.B
        for _ in range(count - 1):
            out.append(self.C @ AkB)
            AkB = self.A @ AkB
        return np.array(out)

    def labelled(self, label: str) -> StateSpace:
        return StateSpace(self.A, self.B, self.C, self.D, (label,) * self.nx)

    def states(self, label: str) -> list:
        return [i for i, s in enumerate(self.state_labels) if s == label]

    def to_json(self) -> dict:
        return {k: getattr(self, k).tolist() for k in "ABCD"} | {"state_labels": list(self.state_labels)}


def static(D) -> StateSpace:
    D = np.atleast_2d(np.asarray(D, dtype=float))
    return StateSpace(np.zeros((0, 0)), np.zeros((0, D.shape[1])), np.zeros((D.shape[0], 0)), D)


def identity(k: int) -> StateSpace:
    return static(np.eye(k))


def series(first: StateSpace, second: StateSpace) -> StateSpace:
    """``second`` driven by the output of ``first``."""
    if first.n_out != second.n_in:
        raise ValueError("series connection: dimension mismatch")
    n1 = first.nx
    A = np.block([[first.A, np.zeros((n1, second.nx))],
                  [second.B @ first.C, second.A]])
    B = np.vstack([first.B, second.B @ first.D])
    C = np.hstack([second.D @ first.C, second.C])
    D = second.D @ first.D
    return StateSpace(A, B, C, D, first.state_labels + second.state_labels)


def append(*systems: StateSpace) -> StateSpace:
    """Block-diagonal (parallel, unconnected) combination."""
    A = _bdiag([s.A for s in systems])
    B = _bdiag([s.B for s in systems])
    C = _bdiag([s.C for s in systems])
    D = _bdiag([s.D for s in systems])
    labels = sum((s.state_labels for s in systems), ())
    return StateSpace(A, B, C, D, labels)


def _bdiag(mats) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols))
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _lcm(polys) -> Polynomial:
    acc, seen = Polynomial([1]), []
    for p in polys:
        if p.exact and acc.exact:
            acc = (acc * p) // poly_gcd(acc, p)
        elif p not in seen:
            acc = acc * p
        seen.append(p)
    return acc.monic()


def _companion_column(den: Polynomial, nums) -> tuple:
    """Controllable canonical form for one input column ``nums[i] / den``."""
    k = den.degree
    a = [complex(c).real for c in den.monic().coeffs]
    A = np.zeros((k, k))
    if k:
        A[:-1, 1:] = np.eye(k - 1)
        A[-1, :] = [-c for c in a[:-1]]
    B = np.zeros((k, 1))
    if k:
        B[-1, 0] = 1.0
    C = np.zeros((len(nums), k))
    D = np.zeros((len(nums), 1))
    for i, num in enumerate(nums):
        q, r = divmod(num, den.monic())
        if q.degree > 0:
            raise ImproperError("improper entry cannot be realized")
        D[i, 0] = complex(q.coeffs[0]).real if not q.is_zero() else 0.0
        for j, c in enumerate(r.coeffs):
            C[i, j] = complex(c).real
    return A, B, C, D


def realize(M) -> StateSpace:
    """Column-wise controllable-canonical realization.

    Each input column is realized over the least common multiple of its
    denominators, so a state is shared by every output reading the same input.
    Only real-coefficient transfer objects can be realized.
    """
    if isinstance(M, RationalFunction):
        cols = [[M]]
    elif isinstance(M, PartitionedTransferMatrix):
        cols = [[row[j] for row in M.entries] for j in range(M.m + 1)]
    else:
        cols = [[row[j] for row in M] for j in range(len(M[0]))]
    for col in cols:
        for x in col:
            if not x.is_proper():
                raise ImproperError(f"improper entry {x} cannot be realized")
            if not x.has_real_coeffs():
                raise ValueError("only real-coefficient transfer functions can be realized")
    blocks = []
    for col in cols:
        den = _lcm([x.den for x in col if not x.is_zero()])
        nums = [x.num * (den // x.den) if not x.is_zero() else Polynomial([0]) for x in col]
        blocks.append(_companion_column(den, nums))
    nx = sum(b[0].shape[0] for b in blocks)
    n_out, n_in = len(cols[0]), len(cols)
    A = _bdiag([b[0] for b in blocks]) if nx else np.zeros((0, 0))
    B = _bdiag([b[1] for b in blocks]) if nx else np.zeros((0, n_in))
    C = np.hstack([b[2] for b in blocks]) if nx else np.zeros((n_out, 0))
    D = np.hstack([b[3] for b in blocks])
    return StateSpace(A, B, C, D)


def markov_from_transfer(M, count: int) -> np.ndarray:
    """Series coefficients of every entry, shape ``(count, rows, cols)``."""
    rows = [[M]] if isinstance(M, RationalFunction) else [list(r) for r in M.entries]
    out = np.zeros((count, len(rows), len(rows[0])))
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            out[:, i, j] = [complex(c).real for c in x.series_coeffs(count)]
    return out
