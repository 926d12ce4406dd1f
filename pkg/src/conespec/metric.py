"""Catalog of two-cone spherical metrics given by explicit developing maps.

Two families on the Riemann sphere, cones at 0 and infinity:

* Football(beta): developing map z^beta, both angles 2*pi*beta.  beta = 1 is
  the round sphere (empty divisor).
* PowerCover(n, m): developing map m(z^n) for a Moebius transform m, both
  angles 2*pi*n.  Unitary m leaves the pullback metric equal to the plain
  z^n cover; non-unitary m produces a genuinely different (non-rotation-
  invariant) metric with the same cone data.

The conformal density follows from pulling back the curvature-one metric
4 |dw|^2 / (1 + |w|^2)^2 through the developing map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy import integrate

from .errors import ConePointEvaluation, QuadratureFailure, UnsupportedSelector
from .moebius import (INFINITY, IDENTITY, MoebiusTransform, apply, is_infinity,
                      is_unitary, normalize)


@dataclass(frozen=True)
class ConeDatum:
    """A cone point: position on the extended plane and angle 2*pi*beta."""

    position: object
    beta: object

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("cone parameter beta must be positive")


@dataclass(frozen=True)
class Football:
    """Two equal cones of angle 2*pi*beta at 0 and infinity, developing map z^beta."""

    beta: object

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def order(self):
        return self.beta

    @property
    def radial(self) -> bool:
        return True


@dataclass(frozen=True)
class PowerCover:
    """Branched cover metric: developing map m(z^n), cones of angle 2*pi*n at 0 and infinity."""

    n: int
    m: MoebiusTransform = field(default=IDENTITY)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        t = normalize(self.m)
        object.__setattr__(self, "m", t)

    @property
    def order(self):
        return Fraction(self.n)

    @property
    def radial(self) -> bool:
        return is_unitary(self.m)


MetricSpec = object  # Football | PowerCover


def cones(spec) -> list:
    return [ConeDatum(0j, spec.order), ConeDatum(INFINITY, spec.order)]


def cone_divisor(spec) -> list:
    """R-divisor entries (point, beta - 1); empty for the round sphere."""
    b = spec.order
    if b == 1:
        return []
    return [(0j, b - 1), (INFINITY, b - 1)]


def developing_map_value(spec, z: complex):
    """One representative of the (multi-valued for non-integer beta) developing map."""
    z = complex(z)
    if isinstance(spec, Football):
        b = float(spec.beta)
        if z == 0:
            return 0j
        angle = b * math.atan2(z.imag, z.real)
        return abs(z) ** b * complex(math.cos(angle), math.sin(angle))
    return apply(spec.m, z ** spec.n)


def density(spec, z) -> float:
    """Conformal density e^{2u} at a finite point z != 0.

    Footballs and unitary power covers reduce to
    4 b^2 |z|^(2b-2) / (1 + |z|^(2b))^2; a non-unitary Moebius factor changes
    the metric and the density is evaluated from the actual developing map,
    which simplifies to 4 n^2 |z|^(2n-2) / (|a z^n + b|^2 + |c z^n + d|^2)^2.
    """
    if is_infinity(z):
        raise ConePointEvaluation("density is singular at the cone at infinity")
    z = complex(z)
    if z == 0:
        raise ConePointEvaluation("density is singular at the cone at 0")
    r = abs(z)
    if isinstance(spec, Football) or spec.radial:
        b = float(spec.order)
        return 4.0 * b * b * r ** (2 * b - 2) / (1.0 + r ** (2 * b)) ** 2
    n = spec.n
    a, bb, c, d = (complex(x) for x in spec.m.entries())
    w = z ** n
    s = abs(a * w + bb) ** 2 + abs(c * w + d) ** 2
    return 4.0 * n * n * r ** (2 * n - 2) / (s * s)


def canonical_eigenfunction(spec, z) -> float:
    """phi = (1 - |f|^2) / (1 + |f|^2) for the catalog developing map f.

    Extends continuously to the cones: limits are taken at z = 0 and infinity.
    """
    if isinstance(spec, Football):
        if is_infinity(z):
            return -1.0
        z = complex(z)
        if z == 0:
            return 1.0
        t = abs(z) ** (2 * float(spec.beta))
        return (1.0 - t) / (1.0 + t)
    if is_infinity(z):
        f = apply(spec.m, INFINITY)
    else:
        z = complex(z)
        f = apply(spec.m, z ** spec.n)
    if is_infinity(f):
        return -1.0
    t = abs(complex(f)) ** 2
    return (1.0 - t) / (1.0 + t)


def eigenfunction_z_derivative(spec, z: complex) -> complex:
    """d(phi)/dz of the canonical eigenfunction: -2 conj(f) f' / (1 + |f|^2)^2."""
    z = complex(z)
    if isinstance(spec, Football):
        b = float(spec.beta)
        t = abs(z) ** (2 * b)
        # conj(f) f' = b |z|^(2b-2) conj(z) for f = z^b
        return -2.0 * b * abs(z) ** (2 * b - 2) * z.conjugate() / (1.0 + t) ** 2
    n = spec.n
    a, bb, c, d = (complex(x) for x in spec.m.entries())
    w = z ** n
    num, den = a * w + bb, c * w + d
    fprime = n * z ** (n - 1) / (den * den)
    f = num / den
    return -2.0 * f.conjugate() * fprime / (1.0 + abs(f) ** 2) ** 2


def geodesic_radius(spec, r: float) -> float:
    """Geodesic distance from the cone at 0 to |z| = r: 2 arctan(r^beta).

    Only meaningful for rotation-invariant members of the catalog.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    return 2.0 * math.atan(r ** float(spec.order))


def total_area(spec, rel_tol: float = 1e-10) -> float:
    """Area of the metric by adaptive quadrature over the two charts |z| <= 1 and |z| >= 1.

    Gauss--Bonnet predicts 4*pi*beta for the catalog.
    """
    if isinstance(spec, Football) or spec.radial:
        b = float(spec.order)

        def radial_density(r):
            return 4.0 * b * b * r ** (2 * b - 1) / (1.0 + r ** (2 * b)) ** 2

        inner, err_in = integrate.quad(radial_density, 0.0, 1.0, epsabs=0.0, epsrel=rel_tol)
        # outer chart via r = 1/rho: dens * r dr = [radial_density(1/rho) / rho^2] drho
        outer, err_out = integrate.quad(
            lambda rho: radial_density(1.0 / rho) / rho ** 2, 0.0, 1.0,
            epsabs=0.0, epsrel=rel_tol)
        total = 2.0 * math.pi * (inner + outer)
        if err_in + err_out > 100 * rel_tol * abs(inner + outer):
            raise QuadratureFailure("radial area quadrature did not converge")
        return total

    def planar(r, theta):
        return density(spec, r * complex(math.cos(theta), math.sin(theta))) * r

    def outer_chart(rho, theta):
        # pull the |z| >= 1 region back to the unit w-disk, z = 1/w
        if rho == 0:
            return 0.0
        w = rho * complex(math.cos(theta), math.sin(theta))
        z = 1.0 / w
        return density(spec, z) * rho / rho ** 4

    inner, err_in = integrate.dblquad(planar, 0.0, 2 * math.pi, 0.0, 1.0,
                                      epsabs=1e-11, epsrel=1e-9)
    outer, err_out = integrate.dblquad(outer_chart, 0.0, 2 * math.pi, 0.0, 1.0,
                                       epsabs=1e-11, epsrel=1e-9)
    total = inner + outer
    if err_in + err_out > 1e-6 * abs(total):
        raise QuadratureFailure("two-chart area quadrature did not converge")
    return total


def schwarzian_principal_coefficient(spec):
    """Coefficient of z^-2 in the Schwarzian of the developing map, by symbolic differentiation.

    Returns an exact Fraction when the cone parameter is rational (exact mode),
    a float otherwise.  The result always equals (1 - beta^2) / 2.
    """
    import sympy

    z = sympy.symbols("z", positive=True)
    exact = isinstance(spec.order, (int, Fraction))
    if isinstance(spec, Football):
        b = spec.beta
        bs = sympy.Rational(Fraction(b)) if exact else sympy.Float(float(b), 30)
        f = z ** bs
    else:
        n = spec.n
        a, bb, c, d = (sympy.sympify(complex(x)) for x in spec.m.entries())
        f = (a * z ** n + bb) / (c * z ** n + d)
    f1 = sympy.diff(f, z)
    f2 = sympy.diff(f, z, 2)
    f3 = sympy.diff(f, z, 3)
    schwarzian = sympy.simplify(f3 / f1 - sympy.Rational(3, 2) * (f2 / f1) ** 2)
    principal = sympy.simplify(sympy.limit(z * z * schwarzian, z, 0, dir="+"))
    if isinstance(spec, Football) and exact:
        rat = sympy.nsimplify(principal)
        return Fraction(int(rat.p), int(rat.q))
    value = complex(principal)
    if abs(value.imag) > 1e-9 * (1 + abs(value.real)):
        raise ArithmeticError("Schwarzian principal coefficient came out non-real")
    return value.real
