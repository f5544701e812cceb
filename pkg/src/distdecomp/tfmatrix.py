"""Partitioned transfer matrices, the lambda-closure map, and channel transforms.

A partitioned matrix has one scalar "local" channel (gradient ``u -> y`` for an
algorithm, signal ``w -> y`` for an estimator) and an ``m``-dimensional network
channel ``v -> z``.  It is stored as a full ``(1+m) x (1+m)`` array of
:class:`RationalFunction` entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RankDeficientError, StructuralSingularityError
from .ratpoly import Polynomial, RationalFunction, exact

RFMatrix = list  # list of lists of RationalFunction


def as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x, 1)
    if isinstance(x, float) or isinstance(x, complex):
        return RationalFunction.const(exact(x))
    return RationalFunction.const(x)


def identity(n: int) -> RFMatrix:
    one, zero = RationalFunction.const(1), RationalFunction.const(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: RFMatrix, b: RFMatrix) -> RFMatrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = RationalFunction.const(0)
            for k in range(inner):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _eliminate(a: RFMatrix, rhs: RFMatrix):
    """Gauss-Jordan over the rational-function field; returns ``a^-1 rhs``.

    Raises ``ZeroDivisionError`` when ``a`` is singular (no nonzero pivot).
    """
    n = len(a)
    aug = [list(a[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError("singular rational matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def inverse(a: RFMatrix) -> RFMatrix:
    try:
        return _eliminate(a, identity(len(a)))
    except ZeroDivisionError as exc:
        raise RankDeficientError("matrix does not have full normal rank") from exc


def determinant(a: RFMatrix) -> RationalFunction:
    n = len(a)
    m = [list(r) for r in a]
    det = RationalFunction.const(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if pivot is None:
            return RationalFunction.const(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        for r in range(col + 1, n):
            if not m[r][col].is_zero():
                f = m[r][col] / p
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


_ROLES = {"H": ("gradient", "network"), "G": ("signal", "network")}


@dataclass(frozen=True)
class PartitionedTransferMatrix:
    """``(1+m) x (1+m)`` transfer matrix split as ``[[11, 12], [21, 22]]``.

    ``symbol`` is ``"H"`` for algorithms and ``"G"`` for estimators; it only
    affects block names and the channel-role metadata.
    """

    entries: tuple
    label: str = ""
    symbol: str = "G"
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        rows = tuple(tuple(as_rf(x) for x in row) for row in self.entries)
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise ValueError("partitioned matrix must be square with dimension 1+m, m >= 1")
        modes = {x.exact for r in rows for x in r}
        if len(modes) > 1:
            rows = tuple(tuple(x.to_float() for x in r) for r in rows)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_blocks(cls, b11, b12, b21, b22, **kw) -> PartitionedTransferMatrix:
        m = len(b12)
        rows = [[b11, *b12]]
        for i in range(m):
            rows.append([b21[i], *b22[i]])
        return cls(tuple(tuple(r) for r in rows), **kw)

    @property
    def m(self) -> int:
        return len(self.entries) - 1

    @property
    def exact(self) -> bool:
        return all(x.exact for r in self.entries for x in r)

    @property
    def roles(self) -> tuple:
        return _ROLES.get(self.symbol, ("local", "network"))

    @property
    def b11(self) -> RationalFunction:
        return self.entries[0][0]

    @property
    def b12(self) -> tuple:
        return self.entries[0][1:]

    @property
    def b21(self) -> tuple:
        return tuple(r[0] for r in self.entries[1:])

    @property
    def b22(self) -> tuple:
        return tuple(r[1:] for r in self.entries[1:])

    def __getitem__(self, idx) -> RationalFunction:
        i, j = idx
        return self.entries[i][j]

    def entry_name(self, i: int, j: int) -> str:
        """Superscript entry name, e.g. ``H^{13}`` (1-based)."""
        return f"{self.symbol}^{{{i + 1}{j + 1}}}"

    def map(self, fn) -> PartitionedTransferMatrix:
        rows = tuple(tuple(fn(x) for x in r) for r in self.entries)
        return PartitionedTransferMatrix(rows, self.label, self.symbol, dict(self.meta))

    def with_label(self, label: str, symbol: str | None = None) -> PartitionedTransferMatrix:
        return PartitionedTransferMatrix(self.entries, label, symbol or self.symbol, dict(self.meta))

    def to_float(self) -> PartitionedTransferMatrix:
        return self.map(lambda x: x.to_float())

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "symbol": self.symbol,
            "m": self.m,
            "roles": list(self.roles),
            "blocks": {
                "11": self.b11.to_json(),
                "12": [x.to_json() for x in self.b12],
                "21": [x.to_json() for x in self.b21],
                "22": [[x.to_json() for x in r] for r in self.b22],
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> PartitionedTransferMatrix:
        b = obj["blocks"]
        dec = RationalFunction.from_json
        m = int(obj.get("m", len(b["12"])))
        if len(b["12"]) != m or len(b["21"]) != m or len(b["22"]) != m:
            raise ValueError("block dimensions disagree with m")
        return cls.from_blocks(
            dec(b["11"]),
            [dec(x) for x in b["12"]],
            [dec(x) for x in b["21"]],
            [[dec(x) for x in r] for r in b["22"]],
            label=obj.get("label", ""),
            symbol=obj.get("symbol", "G"),
        )

    def __str__(self):
        lines = [f"{self.label or self.symbol} (m={self.m})"]
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                lines.append(f"  {self.entry_name(i, j)} = {x}")
        return "\n".join(lines)


def _bind_lambda(lam, exact_mode: bool):
    return exact(lam) if exact_mode else complex(lam)


def lft_eval(M: PartitionedTransferMatrix, lam) -> RationalFunction:
    """Close the network channel through the scalar gain ``lam``.

    Returns ``M11 + lam * M12 (I - lam M22)^{-1} M21``.
    """
    if lam == 0:
        return M.b11
    ex = M.exact
    lam = _bind_lambda(lam, ex)
    if not ex:
        lam_rf = RationalFunction([lam], [1.0])
    else:
        lam_rf = RationalFunction.const(lam)
    m = M.m
    if m == 1:
        g22 = M.b22[0][0]
        d = 1 - lam_rf * g22
        if d.is_zero():
            raise StructuralSingularityError("1 - lambda*M22 is identically zero", lam)
        return M.b11 + lam_rf * M.b12[0] * M.b21[0] / d
    a = [[(1 if i == j else 0) - lam_rf * M.b22[i][j] for j in range(m)] for i in range(m)]
    a = [[as_rf(x) for x in r] for r in a]
    try:
        x = _eliminate(a, [[M.b21[i]] for i in range(m)])
    except ZeroDivisionError as exc:
        raise StructuralSingularityError("I - lambda*M22 is singular", lam) from exc
    acc = M.b11
    for j in range(m):
        if not M.b12[j].is_zero() and not x[j][0].is_zero():
            acc = acc + lam_rf * M.b12[j] * x[j][0]
    return acc


@dataclass(frozen=True)
class LambdaClosure:
    base: PartitionedTransferMatrix
    lam: object
    result: RationalFunction


def lambda_closure(M: PartitionedTransferMatrix, lam) -> LambdaClosure:
    return LambdaClosure(M, lam, lft_eval(M, lam))


def lft_symbolic_numerator_scan(M: PartitionedTransferMatrix, lambdas) -> list:
    """Per-lambda order of ``z = 1`` as a zero of the closed map.

    A closed map that vanishes identically reports ``math.inf``.
    """
    out = []
    for lam in lambdas:
        g = lft_eval(M, lam)
        k = math.inf if g.is_zero() else g.multiplicity_at_one()
        out.append((lam, k))
    return out


def f_transform(G: PartitionedTransferMatrix, F) -> PartitionedTransferMatrix:
    """``diag(1, F) G diag(1, F^-1)``; leaves every lambda-closure unchanged."""
    m = G.m
    F = [[as_rf(x) for x in r] for r in F]
    if len(F) != m or any(len(r) != m for r in F):
        raise ValueError(f"F must be {m}x{m}")
    Finv = inverse(F)
    b12 = matmul([list(G.b12)], Finv)[0]
    b21 = [r[0] for r in matmul(F, [[x] for x in G.b21])]
    b22 = matmul(matmul(F, [list(r) for r in G.b22]), Finv)
    return PartitionedTransferMatrix.from_blocks(G.b11, b12, b21, b22, label=G.label,
                                                 symbol=G.symbol, meta=dict(G.meta))


def diag(*entries) -> RFMatrix:
    n = len(entries)
    zero = RationalFunction.const(0)
    return [[as_rf(entries[i]) if i == j else zero for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class PropernessReport:
    proper: bool
    improper_entries: tuple
    relative_degrees: tuple
    block22_strict: bool
    cross_strict: bool

    @property
    def algorithm_ok(self) -> bool:
        return self.proper and self.block22_strict and self.cross_strict

    @property
    def estimator_ok(self) -> bool:
        return self.proper and self.block22_strict

    def to_json(self) -> dict:
        return {
            "proper": self.proper,
            "improper_entries": [list(e) for e in self.improper_entries],
            "relative_degrees": [[_jsonable_degree(d) for d in r] for r in self.relative_degrees],
            "block22_strictly_proper": self.block22_strict,
            "block21_block12_strictly_proper": self.cross_strict,
        }


def _jsonable_degree(d):
    return "inf" if d == math.inf else int(d)


def value_at_infinity(r: RationalFunction) -> complex:
    """Direct feedthrough ``r(inf)`` of a proper rational function."""
    d = r.relative_degree
    if d > 0:
        return 0j
    if d < 0:
        raise ValueError("improper rational function has no value at infinity")
    return complex(r.num.lead) / complex(r.den.lead)


def feedthrough(rows) -> np.ndarray:
    """Matrix of values at infinity for a (proper) block of entries."""
    return np.array([[value_at_infinity(x) for x in r] for r in rows], dtype=complex)


def properness_report(M: PartitionedTransferMatrix) -> PropernessReport:
    rel = tuple(tuple(x.relative_degree for x in r) for r in M.entries)
    improper = tuple((i, j) for i, r in enumerate(rel) for j, d in enumerate(r) if d < 0)
    b22_strict = all(x.is_strictly_proper() for r in M.b22 for x in r)
    cross = all((a * b).is_strictly_proper() for a in M.b21 for b in M.b12)
    return PropernessReport(not improper, improper, rel, b22_strict, cross)
