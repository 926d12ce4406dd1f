"""Moebius transformations on the Riemann sphere.

Transforms are stored as a single matrix representative (a, b, c, d) with
ad - bc = 1 after normalization; every predicate in this module is invariant
under the overall sign, so the quotient to PSL(2, C) never needs explicit
handling.  Two scalar modes are supported: ordinary ``complex`` and exact
Gaussian rationals (:class:`ComplexFraction`).  In exact mode normalization
is only possible when the determinant is a perfect square in Q(i).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonExactNormalization, SingularTransform


class _Infinity:
    """The single point at infinity of the extended complex plane."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

#: Points of the extended complex plane: a finite scalar or INFINITY.
ExtendedComplex = object


def is_infinity(point) -> bool:
    return isinstance(point, _Infinity)


def _fraction_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class ComplexFraction:
    """Gaussian rational: complex number with Fraction real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexFraction):
            return other
        if isinstance(other, (int, Fraction)):
            return ComplexFraction(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexFraction(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexFraction(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexFraction(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexFraction(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero ComplexFraction")
        return ComplexFraction((self.re * o.re + self.im * o.im) / n,
                               (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ComplexFraction(-self.re, -self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ComplexFraction({self.re!r}, {self.im!r})"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    # -- structure ---------------------------------------------------------

    def conjugate(self):
        return ComplexFraction(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def sqrt(self):
        """Principal exact square root; raises NonExactNormalization if none exists in Q(i)."""
        x, y = self.re, self.im
        if y == 0:
            if x >= 0:
                r = _fraction_sqrt(x)
                if r is None:
                    raise NonExactNormalization(f"{x} has no rational square root")
                return ComplexFraction(r, 0)
            r = _fraction_sqrt(-x)
            if r is None:
                raise NonExactNormalization(f"{x} has no Gaussian-rational square root")
            return ComplexFraction(0, r)
        n = _fraction_sqrt(x * x + y * y)
        if n is None:
            raise NonExactNormalization("determinant modulus is not a rational square")
        u = _fraction_sqrt((x + n) / 2)
        if u is None or u == 0:
            raise NonExactNormalization("no Gaussian-rational square root")
        v = y / (2 * u)
        root = ComplexFraction(u, v)
        if root * root != self:
            raise NonExactNormalization("no Gaussian-rational square root")
        # principal branch: positive real part (u > 0 is automatic here)
        return root


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, ComplexFraction))


def _as_exact(x) -> ComplexFraction:
    if isinstance(x, ComplexFraction):
        return x
    return ComplexFraction(x, 0)


def _conj(x):
    if isinstance(x, ComplexFraction):
        return x.conjugate()
    return complex(x).conjugate()


def _abs2(x):
    if isinstance(x, ComplexFraction):
        return x.abs2()
    z = complex(x)
    return z.real * z.real + z.imag * z.imag


@dataclass(frozen=True)
class MoebiusTransform:
    """z -> (a z + b) / (c z + d), one matrix representative of a PSL(2,C) class."""

    a: object
    b: object
    c: object
    d: object

    @property
    def exact(self) -> bool:
        return all(_is_exact_scalar(x) for x in (self.a, self.b, self.c, self.d))

    def determinant(self):
        return self.a * self.d - self.b * self.c

    def entries(self):
        return (self.a, self.b, self.c, self.d)


IDENTITY = MoebiusTransform(1, 0, 0, 1)


def identity() -> MoebiusTransform:
    return IDENTITY


def normalize(t: MoebiusTransform) -> MoebiusTransform:
    """Scale the representative to determinant one (principal square root).

    Exact transforms normalize only when the determinant is a perfect square
    in the Gaussian rationals; otherwise NonExactNormalization is raised.
    """
    det = t.determinant()
    if t.exact:
        det = _as_exact(det)
        if not det:
            raise SingularTransform("determinant is zero")
        s = det.sqrt()
        return MoebiusTransform(_as_exact(t.a) / s, _as_exact(t.b) / s,
                                _as_exact(t.c) / s, _as_exact(t.d) / s)
    det = complex(det)
    if abs(det) < 1e-280:
        raise SingularTransform("determinant is zero")
    s = cmath.sqrt(det)
    return MoebiusTransform(complex(t.a) / s, complex(t.b) / s,
                            complex(t.c) / s, complex(t.d) / s)


def apply(t: MoebiusTransform, w):
    """Evaluate the transform on the extended complex plane (total map)."""
    a, b, c, d = t.entries()
    if is_infinity(w):
        if (isinstance(c, ComplexFraction) and not c) or (not isinstance(c, ComplexFraction) and complex(c) == 0):
            return INFINITY
        return a / c
    if t.exact and _is_exact_scalar(w):
        denom = _as_exact(c) * _as_exact(w) + _as_exact(d)
        if not denom:
            return INFINITY
        return (_as_exact(a) * _as_exact(w) + _as_exact(b)) / denom
    w = complex(w)
    denom = complex(c) * w + complex(d)
    if denom == 0:
        return INFINITY
    return (complex(a) * w + complex(b)) / denom


def compose(s: MoebiusTransform, t: MoebiusTransform) -> MoebiusTransform:
    """Matrix product; acts as apply(s, apply(t, .)).  Result is renormalized."""
    a = s.a * t.a + s.b * t.c
    b = s.a * t.b + s.b * t.d
    c = s.c * t.a + s.d * t.c
    d = s.c * t.b + s.d * t.d
    out = MoebiusTransform(a, b, c, d)
    if out.exact:
        # product of determinant-one matrices already has determinant one
        if _as_exact(out.determinant()) == ComplexFraction(1, 0):
            return out
        return normalize(out)
    det = complex(out.determinant())
    if abs(det - 1.0) > 1e-13:
        return normalize(out)
    return out


def inverse(t: MoebiusTransform) -> MoebiusTransform:
    return MoebiusTransform(t.d, -t.b, -t.c, t.a)


def is_unitary(t: MoebiusTransform, tol: float = 1e-12) -> bool:
    """True iff the representative lies in SU(2): |a|^2+|b|^2 = 1, c = -conj(b), d = conj(a)."""
    if t.exact:
        a, b, c, d = (_as_exact(x) for x in t.entries())
        return (a.abs2() + b.abs2() == 1) and (c == -b.conjugate()) and (d == a.conjugate())
    a, b, c, d = (complex(x) for x in t.entries())
    return (abs(_abs2(a) + _abs2(b) - 1.0) <= tol
            and abs(c + b.conjugate()) <= tol
            and abs(d - a.conjugate()) <= tol)


def rotation(theta: float) -> MoebiusTransform:
    """The U(1) element w -> exp(i theta) w."""
    h = cmath.exp(0.5j * theta)
    return MoebiusTransform(h, 0, 0, 1 / h)


def unitary_from_pair(a: complex, b: complex) -> MoebiusTransform:
    """SU(2) element with first row (a, b), rescaled so |a|^2 + |b|^2 = 1."""
    norm = math.sqrt(_abs2(a) + _abs2(b))
    if norm == 0:
        raise SingularTransform("zero row")
    a, b = complex(a) / norm, complex(b) / norm
    return MoebiusTransform(a, b, -b.conjugate(), a.conjugate())
