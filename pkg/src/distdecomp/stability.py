"""Root location relative to the unit circle, all-pass correction, lambda grids."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import RefusedError, StructuralSingularityError
from .ratpoly import GaussianRational, Polynomial, RationalFunction

logger = logging.getLogger(__name__)

STABILITY_MARGIN = 1e-9
CIRCLE_TOL = 1e-7
_CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class RootReport:
    roots: tuple  # ((complex, multiplicity), ...)
    max_modulus: float
    all_inside_open_disk: bool
    on_circle: tuple

    @property
    def stable(self) -> bool:
        return self.all_inside_open_disk

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.roots)

    @property
    def margin(self) -> float:
        return 1.0 - self.max_modulus

    def to_json(self) -> dict:
        return {
            "roots": [[r.real, r.imag, k] for r, k in self.roots],
            "max_modulus": self.max_modulus,
            "all_inside_open_disk": self.all_inside_open_disk,
            "on_circle": [[r.real, r.imag] for r in self.on_circle],
        }


def _cluster(values) -> list:
    groups: list[list[complex]] = []
    for v in sorted(values, key=lambda c: (round(c.real, 9), round(c.imag, 9))):
        for g in groups:
            if abs(g[0] - v) < _CLUSTER_TOL * max(1.0, abs(v)):
                g.append(v)
                break
        else:
            groups.append([v])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def roots(p: Polynomial, margin: float = STABILITY_MARGIN, circle_tol: float = CIRCLE_TOL) -> RootReport:
    """All roots of ``p`` with multiplicities and unit-disk classification.

    Exact polynomials have their roots at ``z = 0`` and ``z = 1`` split off
    by exact division before the companion-matrix eigenvalue solve.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    found = []
    rest = p
    if p.exact:
        for point in (0, 1):
            k = rest.root_multiplicity(point)
            if k:
                found.append((complex(point), k))
                rest = rest // (Polynomial([-point, 1]) ** k)
    found.extend(_cluster(rest.numpy_roots()))
    found.sort(key=lambda rk: (-abs(rk[0]), rk[0].real, rk[0].imag))
    mods = [abs(r) for r, _ in found]
    max_mod = max(mods) if mods else 0.0
    on_circle = tuple(r for r, _ in found if abs(abs(r) - 1.0) < circle_tol)
    inside = max_mod < 1.0 - margin
    return RootReport(tuple(found), float(max_mod), bool(inside), on_circle)


def pole_report(r: RationalFunction) -> RootReport:
    return roots(r.den)


def zero_report(r: RationalFunction) -> RootReport:
    return roots(r.num)


def is_stable(r: RationalFunction) -> bool:
    """True iff every pole of ``r`` lies strictly inside the unit disk."""
    return pole_report(r).stable


def is_minimum_phase(r: RationalFunction) -> bool:
    return r.is_zero() or r.num.degree < 1 or zero_report(r).stable


def allpass_correction(r: RationalFunction, circle_tol: float = CIRCLE_TOL):
    """Reflect the zeros of ``r`` on/outside the unit circle into the disk.

    Returns ``(phi, phi * r)`` where ``phi`` is the product of factors
    ``(1 - conj(z0) z) / (z - z0)``.  For real coefficients that product equals
    ``rev(q) / q`` with ``q`` the monic factor of the numerator carrying those
    zeros, which keeps exact inputs exact whenever ``q`` has rational
    coefficients.
    """
    if r.is_zero() or r.num.degree < 1:
        return RationalFunction.const(1), r
    rs = r.num.numpy_roots()
    band = [z0 for z0 in rs if abs(abs(z0) - 1.0) < circle_tol]
    if band:
        raise RefusedError(
            "zeros on the unit circle cannot be reflected by an all-pass factor",
            {"circle_zeros": [[z0.real, z0.imag] for z0 in band]},
        )
    outside = [z0 for z0 in rs if abs(z0) > 1.0]
    if not outside:
        return RationalFunction.const(1), r
    q = _outside_factor(r.num, outside)
    phi = RationalFunction(q.conjugate().reversed(q.degree), q)
    return phi, phi * r


def _outside_factor(num: Polynomial, outside) -> Polynomial:
    fl = Polynomial.from_roots([complex(z0) for z0 in outside])
    if num.exact:
        cand = _rationalize(fl)
        if cand is not None and (num % cand).is_zero():
            return cand
        logger.warning("all-pass factor has irrational coefficients; using floating mode")
    return fl


def _rationalize(p: Polynomial):
    cs = []
    for c in p.coeffs:
        c = complex(c)
        if abs(c.imag) > 1e-9 * max(1.0, abs(c)):
            return None
        cs.append(Fraction(c.real).limit_denominator(10**6))
    return Polynomial(cs)


# -- lambda grids ------------------------------------------------------------

GRID_PROFILES = ("real", "halfdisk", "disk")


def lambda_grid(radius: float, angles: int = 8, radii: int = 4, profile: str = "halfdisk") -> list:
    """Sample of ``0 < |lambda| <= radius`` as exact complex numbers.

    ``real``: the positive real segment, three points per decade over
    ``radii`` decades (the spectrum of a scaled symmetric Laplacian).
    ``halfdisk``: ``angles`` rays across the open right half-disk plus the
    positive real axis, at logarithmic radii ``radius * 10**-k``.
    ``disk``: ``angles`` rays around the full circle.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if profile not in GRID_PROFILES:
        raise ValueError(f"unknown lambda grid profile {profile!r}; choose from {GRID_PROFILES}")
    pts = []
    if profile == "real":
        for k in range(radii):
            for frac in (1.0, 0.5, 0.2):
                pts.append(_exact_point(complex(radius * frac * 10.0 ** (-k))))
    else:
        if profile == "halfdisk":
            thetas = [-math.pi / 2 + math.pi * (k + 0.5) / angles for k in range(angles)] + [0.0]
        else:
            thetas = [2 * math.pi * k / angles for k in range(angles)]
        for k in range(radii):
            rho = radius * 10.0 ** (-k)
            for th in thetas:
                pts.append(_exact_point(cmath.rect(rho, th)))
    uniq = []
    for p in pts:
        if p not in uniq:
            uniq.append(p)
    return sorted(uniq, key=lambda p: (abs(complex(p)), cmath.phase(complex(p))))


def _exact_point(c: complex):
    re = Fraction(c.real).limit_denominator(10**6)
    im = Fraction(c.imag).limit_denominator(10**6)
    return GaussianRational.make(re, im)


@dataclass(frozen=True)
class GridStability:
    ok: bool
    worst_lambda: complex | None
    worst_modulus: float
    samples: int
    failures: tuple = field(default=())

    @property
    def margin(self) -> float:
        return 1.0 - self.worst_modulus

    def to_json(self) -> dict:
        w = self.worst_lambda
        return {
            "ok": self.ok,
            "samples": self.samples,
            "worst_lambda": None if w is None else [w.real, w.imag],
            "worst_pole_modulus": self.worst_modulus,
            "failures": [[c.real, c.imag] for c in self.failures],
        }


def disk_grid_stability(family, radius: float = 0.3, angles: int = 8, radii: int = 4,
                        profile: str = "halfdisk", grid=None) -> GridStability:
    """Check ``family(lam)`` for stability on a lambda grid."""
    grid = lambda_grid(radius, angles, radii, profile) if grid is None else grid
    worst, worst_lam, failures = -1.0, None, []
    for lam in grid:
        try:
            rep = pole_report(family(lam))
        except StructuralSingularityError as exc:
            exc.lam = lam
            raise
        if rep.max_modulus > worst:
            worst, worst_lam = rep.max_modulus, complex(lam)
        if not rep.stable:
            failures.append(complex(lam))
    return GridStability(not failures, worst_lam, max(worst, 0.0), len(grid), tuple(failures))
