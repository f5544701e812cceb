"""Splitting an algorithm into (optimization method, consensus estimator) and back.

``decompose`` builds the all-pass corrected optimization method and the matching
second-order estimator; ``compose`` is its converse.  ``try_factor`` and
``search_factoring_transform`` split a second-order estimator into a cascade of
two first-order estimators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .certify import check_consensus_estimator, check_distributed_algorithm
from .errors import ImproperError, NotFactorableError, PreconditionError, RefusedError
from gmpy2 import mpq

from .ratpoly import GaussianRational, RationalFunction, exact, z
from .stability import allpass_correction
from .tfmatrix import PartitionedTransferMatrix, as_rf, diag, f_transform


def compose(g_opt: RationalFunction, g_con: PartitionedTransferMatrix, label: str = "") -> PartitionedTransferMatrix:
    """Series connection ``H = G_con diag(G_opt, I_m)``.

    The side conditions that make ``H`` an algorithm are not checked here.
    """
    g_opt = as_rf(g_opt)
    H = PartitionedTransferMatrix.from_blocks(
        g_con.b11 * g_opt,
        list(g_con.b12),
        [x * g_opt for x in g_con.b21],
        [list(r) for r in g_con.b22],
        label=label or (f"compose({g_con.label})" if g_con.label else ""),
        symbol="H",
    )
    return H


def cascade(g_con1: PartitionedTransferMatrix, g_con2: PartitionedTransferMatrix,
            label: str = "") -> PartitionedTransferMatrix:
    """Estimator ``G_con1 G_con2`` with network channel ``(v1, v2) -> (z1, z2)``."""
    m1, m2 = g_con1.m, g_con2.m
    zero = RationalFunction.const(0)
    a11 = g_con1.b11 * g_con2.b11
    row0 = [a11, *g_con1.b12, *[g_con1.b11 * x for x in g_con2.b12]]
    rows = [row0]
    for i in range(m1):
        rows.append([g_con1.b21[i] * g_con2.b11, *g_con1.b22[i],
                     *[g_con1.b21[i] * x for x in g_con2.b12]])
    for i in range(m2):
        rows.append([g_con2.b21[i], *([zero] * m1), *g_con2.b22[i]])
    return PartitionedTransferMatrix(tuple(tuple(r) for r in rows), label=label, symbol="G")


@dataclass(frozen=True)
class Decomposition:
    g_opt: RationalFunction
    g_con: PartitionedTransferMatrix
    phi: RationalFunction
    p: int
    q: int
    f_applied: tuple | None = None
    source: str = ""

    def compose(self) -> PartitionedTransferMatrix:
        return compose(self.g_opt, self.g_con, label=f"compose(decompose({self.source}))")

    def to_json(self) -> dict:
        out = {
            "source": self.source,
            "g_opt": self.g_opt.to_json(),
            "g_con": self.g_con.to_json(),
            "phi": self.phi.to_json(),
            "p": self.p,
            "q": self.q,
            "F": None,
        }
        if self.f_applied is not None:
            out["F"] = [[x.to_json() for x in r] for r in self.f_applied]
        return out


def _relative_degree_min(entries) -> int:
    degs = [x.relative_degree for x in entries if not x.is_zero()]
    return int(min(degs)) if degs else 0


def decompose(H: PartitionedTransferMatrix, check: bool = True, **cert_kw) -> Decomposition:
    """Optimization method + second-order estimator reproducing ``H``.

    ``G_opt = z^p * phi * H11`` where ``phi`` reflects the zeros of ``H11``
    outside the unit disk; ``p`` is the relative degree of ``H11`` reduced by
    one when ``H11`` is strictly proper, and ``q`` is the smallest entrywise
    relative degree of ``H12``.
    """
    h11 = H.b11
    if h11.is_zero():
        raise RefusedError("H11 is identically zero; it has no pole at z=1 to decompose",
                           {"entry": "H^{11}"})
    if check:
        cert = check_distributed_algorithm(H, **cert_kw)
        if not cert.passed:
            raise PreconditionError(f"{H.label or 'H'} is not a certified distributed algorithm "
                                    f"(failed: {', '.join(cert.failed()) or cert.verdict})", cert)
    phi, _ = allpass_correction(h11)
    rd = int(h11.relative_degree)
    p = rd - 1 if rd >= 1 else rd
    q = _relative_degree_min(H.b12)

    g_opt = z ** p * phi * h11
    g11 = z ** (-p) / phi
    g12 = [z ** q * x for x in H.b12]
    g21 = [z ** (-p - q) * x / (h11 * phi) for x in H.b21]
    g_con = PartitionedTransferMatrix.from_blocks(g11, g12, g21, [list(r) for r in H.b22],
                                                  label=f"G_con({H.label})" if H.label else "G_con",
                                                  symbol="G")
    for i, row in enumerate(g_con.entries):
        for j, x in enumerate(row):
            if not x.is_proper():
                raise ImproperError(f"decomposition produced improper {g_con.entry_name(i, j)} = {x}")
    return Decomposition(g_opt, g_con, phi, p, q, None, H.label)


@dataclass(frozen=True)
class Factoring:
    g_con1: PartitionedTransferMatrix
    g_con2: PartitionedTransferMatrix
    split: tuple
    source: PartitionedTransferMatrix
    F: tuple | None = None

    def rebuild(self) -> PartitionedTransferMatrix:
        return cascade(self.g_con1, self.g_con2, label=self.source.label)

    def to_json(self) -> dict:
        return {
            "split": list(self.split),
            "g_con1": self.g_con1.to_json(),
            "g_con2": self.g_con2.to_json(),
            "transformed": self.source.to_json(),
            "F": None if self.F is None else [[x.to_json() for x in r] for r in self.F],
        }


def try_factor(G: PartitionedTransferMatrix, split, F=None, certify_factors: bool = True,
               **cert_kw) -> Factoring:
    """Factor ``G`` (optionally after the channel transform ``F``) into two
    first-order estimators over the channel split ``(m1, m2)``.

    Raises :class:`NotFactorableError` carrying the offending determinant.
    """
    m1, m2 = (int(s) for s in split)
    if m1 < 1 or m2 < 1 or m1 + m2 != G.m:
        raise NotFactorableError(f"split {split} does not partition m={G.m} into positive parts",
                                 reason="split")
    Fm = None
    if F is not None:
        Fm = tuple(tuple(as_rf(x) for x in r) for r in F)
        G = f_transform(G, Fm)
    b1 = range(1, 1 + m1)
    b2 = range(1 + m1, 1 + m1 + m2)
    E = G.entries
    nonzero32 = [(i, j) for i in b2 for j in b1 if not E[i][j].is_zero()]
    if nonzero32:
        raise NotFactorableError("block G^{32} is not zero", reason="G32",
                                 determinant=None)
    g11 = E[0][0]
    if g11.is_zero():
        raise NotFactorableError("G^{11} is zero", reason="G11")
    det = [[g11 * E[i][j] - E[0][j] * E[i][0] for j in b2] for i in b1]
    if any(not d.is_zero() for r in det for d in r):
        raise NotFactorableError("G11*G23 - G13*G21 is not zero", determinant=det,
                                 reason="determinant")
    con1 = PartitionedTransferMatrix(
        tuple(tuple(E[i][j] for j in [0, *b1]) for i in [0, *b1]), label="G_con1", symbol="G")
    top = [RationalFunction.const(1), *[E[0][j] / g11 for j in b2]]
    con2 = PartitionedTransferMatrix(
        (tuple(top), *[tuple(E[i][j] for j in [0, *b2]) for i in b2]), label="G_con2", symbol="G")
    if certify_factors:
        for name, fac in (("G_con1", con1), ("G_con2", con2)):
            cert = check_consensus_estimator(fac, order=1, **cert_kw)
            if not cert.passed:
                raise NotFactorableError(f"{name} is not a first-order consensus estimator "
                                         f"(failed: {', '.join(cert.failed()) or cert.verdict})",
                                         reason="factor certificate")
    return Factoring(con1, con2, (m1, m2), G, Fm)


def f_family(alpha=1) -> list:
    """Scalar transform candidates ``sign * c * z^k / (z-1)^j``, identity first."""
    alpha = exact(alpha)
    cs = []
    for c in (exact(1), alpha, 1 / alpha):
        if c not in cs:
            cs.append(c)
    out = []
    for j in (0, 1):
        for k in (0, 1, -1):
            for c in cs:
                for sign in (1, -1):
                    f = sign * c * z ** k / (z - 1) ** j
                    if f not in out:
                        out.append(f)
    return out


@dataclass(frozen=True)
class FactorSearchResult:
    status: str  # "found" | "inconclusive"
    F: tuple | None
    factoring: Factoring | None
    searched: int
    note: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "searched": self.searched,
            "note": self.note,
            "F": None if self.F is None else [[x.to_json() for x in r] for r in self.F],
            "factoring": None if self.factoring is None else self.factoring.to_json(),
        }


def search_factoring_transform(G: PartitionedTransferMatrix, alpha=1, family=None, normalize: bool = True,
                               max_candidates: int = 5000, **cert_kw) -> FactorSearchResult:
    """First diagonal ``F`` from ``family`` that lets ``G`` factor.

    With ``normalize`` a first pass tries the single transform that makes
    every entry of ``G21`` equal to one (the comparison form); a second pass
    walks ``family``.  A miss is reported as inconclusive, never as proof that
    ``G`` does not factor.
    """
    m = G.m
    if m < 2:
        return FactorSearchResult("inconclusive", None, None, 0,
                                  "m < 2: no split into two nonempty channel groups")
    family = f_family(alpha) if family is None else [as_rf(f) for f in family]
    splits = [(m1, m - m1) for m1 in range(1, m)]
    searched = 0

    def attempt(per_channel):
        nonlocal searched
        for combo in itertools.product(*per_channel):
            for split in splits:
                if searched >= max_candidates:
                    return None
                searched += 1
                F = diag(*combo)
                try:
                    fac = try_factor(G, split, F, **cert_kw)
                except NotFactorableError:
                    continue
                return tuple(tuple(r) for r in F), fac
        return None

    passes = []
    if normalize:
        passes.append([[1 / x] if not x.is_zero() else [] for x in G.b21])
    passes.append([family] * m)
    for per_channel in passes:
        if any(not c for c in per_channel):
            continue
        hit = attempt(per_channel)
        if hit is not None:
            return FactorSearchResult("found", hit[0], hit[1], searched)
    return FactorSearchResult("inconclusive", None, None, searched,
                              "no member of the searched family factors the estimator")


def composition_side_condition(g_opt: RationalFunction, g_con: PartitionedTransferMatrix) -> bool:
    """Either ``G_opt`` or ``G21 G12`` strictly proper."""
    if g_opt.is_strictly_proper():
        return True
    return all((a * b).is_strictly_proper() for a in g_con.b21 for b in g_con.b12)


def round_trip_lambdas() -> tuple:
    """Seven exact closure points (including 0) used for round-trip checks."""
    pts = tuple(exact(s) for s in ("0", "0.1", "0.25", "-0.05", "0.2+0.1j", "0.05-0.15j"))
    return pts + (GaussianRational(mpq(1, 3), mpq(1, 7)),)


__all__ = [
    "compose", "cascade", "Decomposition", "decompose", "Factoring", "try_factor", "f_family",
    "FactorSearchResult", "search_factoring_transform", "composition_side_condition",
    "round_trip_lambdas",
]
