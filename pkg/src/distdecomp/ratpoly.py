"""Polynomials and rational functions in ``z`` with exact or floating coefficients.

Exact coefficients are :class:`gmpy2.mpq` rationals (or :class:`GaussianRational`
when a complex parameter such as a Laplacian eigenvalue enters the algebra).
Floating coefficients are Python ``float``/``complex``.  A value is in exact mode
iff every coefficient is exact; mixing modes degrades to floating.

Every :class:`RationalFunction` is kept canonical: numerator and denominator are
coprime and the denominator is monic.
"""

from __future__ import annotations

import logging
import math
import numbers
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .errors import DegreeCapError, ImproperError

logger = logging.getLogger(__name__)

DEGREE_CAP = 64
CANCEL_TOL = 1e-9

_MPQ = type(mpq(0))


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts.

    Results whose imaginary part vanishes collapse back to plain ``mpq``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def make(re, im):
        if im == 0:
            return mpq(re)
        return GaussianRational(re, im)

    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (_MPQ, int, Fraction)):
            return mpq(x), mpq(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = p
        return GaussianRational.make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        n = c * c + d * d
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        a, b = self.re, self.im
        return GaussianRational.make((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(p[0], p[1]) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, numbers.Complex):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def exact(x):
    """Bind a scalar to an exact rational (or Gaussian rational) value.

    Floats are read through their shortest decimal repr, so ``exact(0.1)``
    is exactly 1/10.
    """
    if isinstance(x, (_MPQ, GaussianRational)):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if s.endswith(("i", "j")):
            return _parse_complex(s[:-1])
        return mpq(Fraction(s))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot bind non-finite value {x!r}")
        return mpq(repr(x))
    if isinstance(x, complex):
        return GaussianRational.make(exact(x.real), exact(x.imag))
    if isinstance(x, np.generic):
        return exact(x.item())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def _parse_complex(body: str) -> GaussianRational:
    """``a+b`` (imaginary unit already stripped); parts may be decimals or fractions."""
    cut = 0
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    re, im = (body[:cut], body[cut:]) if cut else ("0", body)
    if im in ("", "+", "-"):
        im += "1"
    return GaussianRational.make(mpq(Fraction(re)), mpq(Fraction(im)))


def is_exact_scalar(x) -> bool:
    return isinstance(x, (_MPQ, GaussianRational, int, Fraction))


def _floatify(c):
    if isinstance(c, (GaussianRational, complex)):
        c = complex(c)
        return c if c.imag != 0 else c.real
    return float(c)


def _is_zero(c) -> bool:
    return c == 0


class Polynomial:
    """Immutable univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, Polynomial):
            self.coeffs, self.exact = coeffs.coeffs, coeffs.exact
            return
        if isinstance(coeffs, np.ndarray):
            coeffs = coeffs.tolist()
        elif not isinstance(coeffs, (list, tuple)):
            coeffs = [coeffs]
        is_exact = all(is_exact_scalar(c) for c in coeffs)
        cs = [exact(c) for c in coeffs] if is_exact else [_floatify(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        if len(cs) - 1 > DEGREE_CAP:
            raise DegreeCapError(f"degree {len(cs) - 1} exceeds cap {DEGREE_CAP}")
        self.coeffs = tuple(cs)
        self.exact = is_exact

    @classmethod
    def _from_list(cls, cs, is_exact):
        # trusted fast path: coefficients already normalized to one mode
        p = object.__new__(cls)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        if len(cs) - 1 > DEGREE_CAP:
            raise DegreeCapError(f"degree {len(cs) - 1} exceeds cap {DEGREE_CAP}")
        p.coeffs = tuple(cs)
        p.exact = is_exact
        return p

    @classmethod
    def from_roots(cls, roots, lead=1):
        cs = [lead]
        for r in roots:
            nxt = [0] * (len(cs) + 1)
            for k, c in enumerate(cs):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - r * c
            cs = nxt
        return cls(cs)

    @classmethod
    def monomial(cls, k: int, c=1):
        return cls([0] * k + [c])

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_float(self) -> Polynomial:
        if not self.exact:
            return self
        return Polynomial._from_list([_floatify(c) for c in self.coeffs], False)

    def _coerce(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial(other)
        if self.exact and other.exact:
            return self, other, True
        return self.to_float(), other.to_float(), False

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b, ex = self._coerce(other)
        n = max(len(a.coeffs), len(b.coeffs))
        ca = a.coeffs + (0,) * (n - len(a.coeffs))
        cb = b.coeffs + (0,) * (n - len(b.coeffs))
        zero = mpq(0) if ex else 0.0
        return Polynomial._from_list([x + y + zero for x, y in zip(ca, cb)], ex)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_list([-c for c in self.coeffs], self.exact)

    def __sub__(self, other):
        return self + (-Polynomial(other) if not isinstance(other, Polynomial) else -other)

    def __rsub__(self, other):
        return Polynomial(other) - self

    def __mul__(self, other):
        a, b, ex = self._coerce(other)
        if not a.coeffs or not b.coeffs:
            return Polynomial._from_list([], ex)
        out = [mpq(0) if ex else 0.0] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if _is_zero(x):
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = out[i + j] + x * y
        return Polynomial._from_list(out, ex)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1] if self.exact else [1.0])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        a, b, ex = self._coerce(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a.coeffs)
        db = b.degree
        if len(rem) - 1 < db:
            return Polynomial._from_list([], ex), a
        quot = [mpq(0) if ex else 0.0] * (len(rem) - db)
        inv_lead = 1 / b.lead
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv_lead
            quot[k] = c
            if _is_zero(c):
                continue
            for j, bc in enumerate(b.coeffs):
                rem[k + j] = rem[k + j] - c * bc
        rem = rem[:db]
        return Polynomial._from_list(quot, ex), Polynomial._from_list(rem, ex)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, z):
        if self.exact and is_exact_scalar(z):
            z = exact(z)
            acc = mpq(0)
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        z = complex(z) if not isinstance(z, (float, int)) else z
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + _floatify(c)
        return acc

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        lead = self.lead
        return Polynomial._from_list([c / lead for c in self.coeffs], self.exact)

    def scale(self, c) -> Polynomial:
        return self * Polynomial([c])

    def conjugate(self) -> Polynomial:
        cs = []
        for c in self.coeffs:
            cs.append(c.conjugate() if isinstance(c, (GaussianRational, complex)) else c)
        return Polynomial._from_list(cs, self.exact)

    def reversed(self, degree: int | None = None) -> Polynomial:
        """``z**d * p(1/z)`` for ``d = degree`` (defaults to ``self.degree``)."""
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return Polynomial(cs[::-1])

    def has_real_coeffs(self) -> bool:
        return all(not isinstance(c, (GaussianRational, complex)) for c in self.coeffs)

    def root_multiplicity(self, root) -> int:
        """Exact multiplicity of ``root`` (exact mode only)."""
        if not self.exact:
            raise TypeError("exact multiplicity requires exact coefficients")
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        factor = Polynomial([-exact(root), 1])
        k, p = 0, self
        while p.degree >= 1:
            q, r = divmod(p, factor)
            if not r.is_zero():
                break
            k, p = k + 1, q
        return k

    def numpy_roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        desc = [complex(c) for c in reversed(self.coeffs)]
        return np.roots(np.array(desc, dtype=complex))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            cs = _scalar_str(c)
            if mono and cs in ("1", "-1"):
                cs = "" if cs == "1" else "-"
            elif mono:
                cs = cs + "*"
            terms.append(f"{cs}{mono}")
        out = " + ".join(terms)
        return out.replace("+ -", "- ")


def _scalar_str(c) -> str:
    if isinstance(c, _MPQ):
        return str(c)
    if isinstance(c, GaussianRational):
        return repr(c)
    if isinstance(c, complex):
        return f"({c.real:.12g}{c.imag:+.12g}j)"
    return f"{c:.12g}"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the exact coefficient field."""
    if not (a.exact and b.exact):
        raise TypeError("poly_gcd is defined for exact polynomials only")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else Polynomial([1])


def _match_roots(rn, rd, tol):
    """Greedy pairing of numerator/denominator roots within relative ``tol``."""
    rn, rd = list(rn), list(rd)
    cancelled = []
    i = 0
    while i < len(rn):
        best, best_d = None, None
        for j, r in enumerate(rd):
            d = abs(rn[i] - r)
            if d <= tol * max(1.0, abs(r)) and (best_d is None or d < best_d):
                best, best_d = j, d
        if best is not None:
            cancelled.append((rn[i], rd[best]))
            rn.pop(i)
            rd.pop(best)
        else:
            i += 1
    return rn, rd, cancelled


class RationalFunction:
    """Canonical ratio ``num(z) / den(z)``; construct via the constructor or helpers."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, tol: float | None = None):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num, den = _canonical_pair(num, den, CANCEL_TOL if tol is None else tol)
        self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _trusted(cls, num, den):
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def z(cls, power: int = 1) -> RationalFunction:
        """The shift variable ``z**power`` (negative powers allowed)."""
        if power >= 0:
            return cls._trusted(Polynomial.monomial(power, mpq(1)), Polynomial([mpq(1)]))
        return cls._trusted(Polynomial([mpq(1)]), Polynomial.monomial(-power, mpq(1)))

    @classmethod
    def const(cls, c) -> RationalFunction:
        return cls(Polynomial([c]), Polynomial([mpq(1)] if is_exact_scalar(c) else [1.0]))

    @classmethod
    def from_roots(cls, zeros=(), poles=(), gain=1) -> RationalFunction:
        return cls(Polynomial.from_roots(zeros, gain), Polynomial.from_roots(poles))

    # -- properties -----------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.num.exact and self.den.exact

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def relative_degree(self) -> float:
        """``deg den - deg num``; ``inf`` for the zero function."""
        if self.is_zero():
            return math.inf
        return self.den.degree - self.num.degree

    def is_proper(self) -> bool:
        return self.relative_degree >= 0

    def is_strictly_proper(self) -> bool:
        return self.relative_degree >= 1

    def has_real_coeffs(self) -> bool:
        return self.num.has_real_coeffs() and self.den.has_real_coeffs()

    def to_float(self) -> RationalFunction:
        if not self.exact:
            return self
        return RationalFunction._trusted(self.num.to_float(), self.den.to_float())

    def zeros(self) -> np.ndarray:
        return self.num.numpy_roots()

    def poles(self) -> np.ndarray:
        return self.den.numpy_roots()

    def multiplicity_at(self, point, tol: float = 1e-7) -> int:
        """Signed order at ``point``: +k for a k-fold zero, -k for a k-fold pole."""
        if self.is_zero():
            raise ValueError("the zero function has no finite order")
        if self.exact and is_exact_scalar(point):
            return self.num.root_multiplicity(point) - self.den.root_multiplicity(point)
        point = complex(point)
        nz = int(np.sum(np.abs(self.zeros() - point) < tol))
        np_ = int(np.sum(np.abs(self.poles() - point) < tol))
        return nz - np_

    def multiplicity_at_one(self) -> int:
        return self.multiplicity_at(1)

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return RationalFunction(x, Polynomial([mpq(1)] if x.exact else [1.0]))
        return RationalFunction.const(x)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._trusted(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(Polynomial([mpq(1)]), Polynomial([mpq(1)])) / self ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = self._lift(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __call__(self, z):
        d = self.den(z)
        if d == 0:
            raise ZeroDivisionError(f"pole at z={z}")
        return self.num(z) / d

    # -- expansions -----------------------------------------------------------
    def series_coeffs(self, count: int) -> list:
        """First ``count`` coefficients of the expansion in powers of ``1/z``."""
        if not self.is_proper():
            raise ImproperError(f"series expansion of improper {self}")
        if count <= 0:
            raise ValueError("count must be positive")
        d = self.den.degree
        ncs = list(self.num.coeffs) + [0] * (d + 1 - len(self.num.coeffs))
        a = [ncs[d - j] for j in range(d + 1)]
        b = [self.den.coeffs[d - j] for j in range(d + 1)]
        zero = mpq(0) if self.exact else 0.0
        h = []
        for t in range(count):
            acc = a[t] if t <= d else zero
            for j in range(1, min(t, d) + 1):
                acc = acc - b[j] * h[t - j]
            h.append(acc + zero)
        return h

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        if not self.has_real_coeffs():
            raise ValueError("only real-coefficient functions are serializable")
        if self.exact:
            enc = str
        else:
            enc = repr
        out = {"num": [enc(c) for c in self.num.coeffs] or ["0"],
               "den": [enc(c) for c in self.den.coeffs]}
        if not self.exact:
            out["mode"] = "float"
        return out

    @classmethod
    def from_json(cls, obj: dict) -> RationalFunction:
        floating = obj.get("mode", "exact") == "float"

        def dec(c):
            if floating:
                return float(c)
            if isinstance(c, float):
                return exact(repr(c))
            return exact(c) if not isinstance(c, str) else mpq(c.strip())

        return cls([dec(c) for c in obj["num"]], [dec(c) for c in obj["den"]])

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _canonical_pair(num: Polynomial, den: Polynomial, tol: float):
    if num.is_zero():
        one = Polynomial([mpq(1)] if (num.exact and den.exact) else [1.0])
        return Polynomial._from_list([], one.exact), one
    if num.exact and den.exact:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
    else:
        num, den = num.to_float(), den.to_float()
        if num.degree > 0 and den.degree > 0:
            rn, rd, cancelled = _match_roots(num.numpy_roots(), den.numpy_roots(), tol)
            if cancelled:
                logger.debug("cancelled near-common roots %s (tol %g)", cancelled, tol)
                real = num.has_real_coeffs() and den.has_real_coeffs()
                num = _rebuild(rn, num.lead, real)
                den = _rebuild(rd, den.lead, real)
    lead = den.lead
    if not (lead == 1):
        num = Polynomial._from_list([c / lead for c in num.coeffs], num.exact)
        den = Polynomial._from_list([c / lead for c in den.coeffs], den.exact)
    return num, den


def _rebuild(roots, lead, real: bool) -> Polynomial:
    cs = np.poly(np.array(roots, dtype=complex))[::-1] * complex(lead) if len(roots) else np.array([complex(lead)])
    if real:
        return Polynomial([float(c.real) for c in cs])
    return Polynomial([complex(c) for c in cs])


def canonicalize(r: RationalFunction, tol: float | None = None) -> RationalFunction:
    """Re-run canonicalization, optionally with a different cancellation tolerance."""
    return RationalFunction(r.num, r.den, tol=tol)


def rf_arith(a, b, op: str) -> RationalFunction:
    """Functional form of the four field operations."""
    a, b = RationalFunction._lift(a), RationalFunction._lift(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


z = RationalFunction.z()
ONE = RationalFunction.const(1)
ZERO = RationalFunction.const(0)
