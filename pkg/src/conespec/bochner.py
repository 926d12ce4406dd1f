"""Complex gradient vector fields of eigenfunctions and the curvature balance.

For an eigenfunction phi with mode expansion phi = sum_k phi_k(r) e^{ik theta}
on a rotation-invariant catalog metric, the complex gradient
X = e^{-2u} (d phi / d zbar) d/dz has mode components

    X_k(r) = (1 + r^(2b))^2 / (8 b^2 r^(2b-2)) * (phi_k' - k phi_k / r)
           = (1 / 8 b^2) * sum_j Ct_j r^(sigma + (2j-2) b + 1),

where the combined coefficients are, with m_j = sigma - k + 2 j b,

    Ct_j = m_j C_j + 2 m_{j-1} C_{j-1} + m_{j-2} C_{j-2}.

For the branch sigma = k the leading series term is annihilated and m_0 = 0;
for sigma = -k it survives with m_0 = -2k.  At eigenvalue 2 the sigma = k
combinations telescope to zero for every j >= 2, which is the coefficient
form of the statement that X is meromorphic there.

The anti-holomorphic derivative has mode coefficients d_j Ct_j with
d_j = sigma - k + (2j - 2) b, and the balance identity

    int |dbar X^z|^2 e^{2u} dx dy = (lam - 2)/4 * int e^{4u} |X^z|^2 dx dy

(eigenvalue lam; both integrals over the plane in the flat Lebesgue measure)
is the integrated curvature identity: the left side is the squared L^2 norm
of the (0,1) part of nabla X, the right side is (lam - 2)/2 times the squared
L^2 norm of X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import ClassificationViolation, NonRadialMetric, UnsupportedSelector
from .frobenius import RadialSeries
from .metric import Football, PowerCover
from .moebius import INFINITY
from .ratfunc import (RationalFunction, clustered_roots, poly_degree,
                      poly_mul, poly_sub, poly_add)


@dataclass(frozen=True)
class ModeVectorField:
    """Coefficient view of one mode of X: entries Ct_j on exponents sigma + (2j-2) b + 1."""

    k: int
    beta: object
    sigma: object
    coeffs: tuple
    exact: bool

    def exponent(self, j: int):
        return self.sigma + (2 * j - 2) * self.beta + 1


def tilde_coefficients(series: RadialSeries):
    """Combined coefficients Ct_j of the mode vector field built from a Frobenius series."""
    beta = series.problem.beta if series.exact else float(series.problem.beta)
    sigma = series.sigma if series.exact else float(series.sigma)
    k = series.problem.k
    coeffs = series.coeffs
    zero = Fraction(0) if series.exact else 0.0

    def factor(j):
        return sigma - k + 2 * j * beta

    def source(j):
        return coeffs[j] if 0 <= j < len(coeffs) else zero

    out = []
    for j in range(len(coeffs)):
        out.append(factor(j) * source(j)
                   + 2 * factor(j - 1) * source(j - 1)
                   + factor(j - 2) * source(j - 2))
    return tuple(out)


def mode_vector_field(series: RadialSeries) -> ModeVectorField:
    return ModeVectorField(k=series.problem.k, beta=series.problem.beta,
                           sigma=series.sigma, coeffs=tilde_coefficients(series),
                           exact=series.exact)


def dbar_mode_coefficients(field: ModeVectorField):
    """Coefficients d_j Ct_j of the mode's anti-holomorphic derivative.

    The factor d_j = sigma - k + (2j - 2) beta vanishes identically for the
    leading term of the sigma = k branch, and for the special integer-cone
    mode k = -n at j = 0, where the singular term drops out of dbar X.
    """
    out = []
    for j, ct in enumerate(field.coeffs):
        d = field.sigma - field.k + (2 * j - 2) * field.beta
        out.append(d * ct)
    return tuple(out)


@dataclass(frozen=True)
class PoleClassification:
    """Order of the vector field at a cone: negative for a pole, positive for a zero."""

    point: object
    order: int


def _order_bound(beta) -> int:
    """Worst admissible order at a cone of parameter beta (order >= bound)."""
    b = float(beta)
    if b < 1:
        return 1
    if b == int(b):
        return 1 - int(b)
    return 1 - math.floor(b)


def pole_order_at_cone(spec, fields, tol: float = 1e-12):
    """Order of the eigenvalue-2 field at both cones, checked against the admissible bound.

    fields is either a list of ModeVectorField (series view; the two cones
    share the order by the reflection symmetry of real catalog eigenfields)
    or a RationalFunction giving X^z in closed form.
    """
    bound = _order_bound(spec.order)
    if isinstance(fields, RationalFunction):
        order0 = _rational_order_at_zero(fields)
        order_inf = 2 + poly_degree(fields.den) - poly_degree(fields.num)
        orders = (order0, order_inf)
    else:
        exponents = []
        scale = max((abs(float(c)) for f in fields for c in f.coeffs), default=0.0)
        if scale == 0.0:
            raise ValueError("all mode fields vanish; no order to classify")
        for f in fields:
            for j, ct in enumerate(f.coeffs):
                if abs(float(ct)) <= tol * scale:
                    continue
                e = float(f.exponent(j))
                if abs(e - round(e)) > 1e-9:
                    raise ClassificationViolation(
                        f"non-integer exponent {e} with nonzero coefficient: "
                        "field is not meromorphic (is lambda = 2?)")
                exponents.append(int(round(e)))
        order = min(exponents)
        orders = (order, order)
    for o in orders:
        if o < bound:
            raise ClassificationViolation(
                f"order {o} at a cone breaches the admissible bound {bound}")
    return (PoleClassification(0j, orders[0]), PoleClassification(INFINITY, orders[1]))


def _rational_order_at_zero(field: RationalFunction) -> int:
    def root_order_at_zero(poly):
        for r, m in clustered_roots(poly):
            if abs(r) < 1e-9:
                return m
        return 0

    return root_order_at_zero(field.num) - root_order_at_zero(field.den)


def closed_form_field(spec, which: str = "canonical") -> RationalFunction:
    """X^z in closed form for the catalog eigenfunctions.

    Differentiating phi = (1 - |f|^2)/(1 + |f|^2) and its two companions
    through X^z = e^{-2u} phi_zbar gives

        canonical: -f / (2 f'),   re: (1 - f^2) / (4 f'),   im: i (1 + f^2) / (4 f'),

    all rational for the catalog maps.  The re/im selectors need a
    single-valued f, hence an integer cone parameter.
    """
    if isinstance(spec, Football) and float(spec.beta) != int(float(spec.beta)):
        if which != "canonical":
            raise UnsupportedSelector(
                "re/im eigenfunctions need integer cone parameter (single-valued map)")
        return RationalFunction([0.0, -1.0 / (2.0 * float(spec.beta))], [1.0])
    if isinstance(spec, Football):
        n = int(float(spec.beta))
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
    else:
        n = spec.n
        a, b, c, d = (complex(x) for x in spec.m.entries())
    if n == 1:
        monomial = [2.0]  # 2 n z^{n-1} degenerates to the constant 2
    else:
        monomial = [0.0] * (n - 1) + [2.0 * n]
    top = np.zeros(n + 1, dtype=complex)
    top[0], top[n] = b, a
    bottom = np.zeros(n + 1, dtype=complex)
    bottom[0], bottom[n] = d, c
    if which == "canonical":
        return RationalFunction(-poly_mul(top, bottom), monomial)
    if which == "re":
        num = 0.5 * poly_sub(poly_mul(bottom, bottom), poly_mul(top, top))
        return RationalFunction(num, monomial)
    if which == "im":
        num = 0.5j * poly_add(poly_mul(bottom, bottom), poly_mul(top, top))
        return RationalFunction(num, monomial)
    raise UnsupportedSelector(f"unknown selector {which!r}")


@dataclass(frozen=True)
class RadialMode:
    """One Fourier mode of a (possibly complex) eigenfunction on (0, 1]."""

    k: int
    phi: object   # callable r -> complex
    dphi: object  # callable r -> complex


@dataclass(frozen=True)
class BalanceResult:
    lhs: float        # int |dbar X^z|^2 e^{2u} dx dy
    rhs: float        # (lam - 2)/4 * int e^{4u} |X^z|^2 dx dy
    x_norm_sq: float  # int |X|^2 dVol = 1/2 int e^{4u} |X^z|^2 dx dy


def _radial_parameter(spec):
    if isinstance(spec, Football):
        return float(spec.beta)
    if isinstance(spec, PowerCover) and spec.radial:
        return float(spec.n)
    raise NonRadialMetric("balance quadrature needs a rotation-invariant density")


def bochner_balance(spec, modes, lam: float, rel_tol: float = 1e-10) -> BalanceResult:
    """Quadrature check of the integrated curvature identity for a mode-represented eigenfunction.

    modes must list every Fourier mode of a real eigenfunction (complex modes
    appear in conjugate +-k pairs); integrals run over the hemisphere r <= 1
    and are doubled, using the r -> 1/r isometry of the catalog metrics.
    """
    beta = _radial_parameter(spec)
    lam = float(lam)

    def e2u(r):
        t = r ** (2 * beta)
        return 4.0 * beta * beta * r ** (2 * beta - 2) / (1.0 + t) ** 2

    def half_a(r):
        t = r ** (2 * beta)
        return (1.0 + t) ** 2 / (8.0 * beta * beta * r ** (2 * beta - 2))

    def half_a_prime(r):
        t = r ** (2 * beta)
        return (4.0 * beta * (1.0 + t) * r
                + (2.0 - 2.0 * beta) * (1.0 + t) ** 2 * r ** (1.0 - 2.0 * beta)) / (8.0 * beta * beta)

    def mode_values(r):
        data = []
        for mode in modes:
            k = mode.k
            phi = complex(mode.phi(r))
            dphi = complex(mode.dphi(r))
            ddphi = -dphi / r + (k * k / (r * r) - lam * e2u(r)) * phi
            a_val = half_a(r)
            x = a_val * (dphi - k * phi / r)
            dx = half_a_prime(r) * (dphi - k * phi / r) + a_val * (ddphi - k * dphi / r + k * phi / (r * r))
            dbar = 0.5 * (dx - (k + 1) * x / r)
            data.append((x, dbar))
        return data

    def lhs_integrand(r):
        return sum(abs(dbar) ** 2 for _, dbar in mode_values(r)) * e2u(r) * r

    def x4_integrand(r):
        return sum(abs(x) ** 2 for x, _ in mode_values(r)) * e2u(r) ** 2 * r

    lhs_half, _ = integrate.quad(lhs_integrand, 0.0, 1.0, epsabs=1e-14,
                                 epsrel=rel_tol, limit=200)
    x4_half, _ = integrate.quad(x4_integrand, 0.0, 1.0, epsabs=1e-14,
                                epsrel=rel_tol, limit=200)
    lhs = 4.0 * math.pi * lhs_half
    x4 = 4.0 * math.pi * x4_half
    return BalanceResult(lhs=lhs, rhs=0.25 * (lam - 2.0) * x4, x_norm_sq=0.5 * x4)


def canonical_modes(spec):
    """Mode representation of the canonical eigenfunction of a radial catalog metric."""
    beta = _radial_parameter(spec)

    def u0(r):
        t = r ** (2 * beta)
        return (1.0 - t) / (1.0 + t)

    def du0(r):
        t = r ** (2 * beta)
        return -4.0 * beta * r ** (2 * beta - 1) / (1.0 + t) ** 2

    if isinstance(spec, Football):
        return [RadialMode(0, u0, du0)]
    a, b, _, _ = (complex(x) for x in spec.m.entries())
    n = spec.n
    c0 = abs(a) ** 2 - abs(b) ** 2
    cplus = -2.0 * a * b.conjugate()
    cminus = -2.0 * a.conjugate() * b

    def un(r):
        t = r ** (2 * n)
        return r ** n / (1.0 + t)

    def dun(r):
        t = r ** (2 * n)
        return n * r ** (n - 1) * (1.0 - t) / (1.0 + t) ** 2

    modes = [RadialMode(0, lambda r: c0 * u0(r), lambda r: c0 * du0(r))]
    if abs(cplus) > 0:
        modes.append(RadialMode(n, lambda r: cplus * un(r), lambda r: cplus * dun(r)))
        modes.append(RadialMode(-n, lambda r: cminus * un(r), lambda r: cminus * dun(r)))
    return modes
