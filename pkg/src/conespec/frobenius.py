"""Frobenius series for the mode-decomposed radial ODE.

Fourier mode k of the eigenvalue equation on a two-cone sphere with density
4 beta^2 r^(2 beta - 2) / (1 + r^(2 beta))^2 solves

    (1 + r^(2 beta))^2 ((r d/dr)^2 - k^2) phi = -4 lambda beta^2 r^(2 beta) phi,

regular-singular at r = 0 with indicial roots +-k.  A solution with leading
exponent sigma expands as phi = sum_j C_j r^(sigma + 2 j beta), and collecting
powers gives, for j >= 1,

    ((sigma+2j b)^2 - k^2) C_j = -4 lam b^2 C_{j-1}
                                 - 2 ((sigma+2(j-1)b)^2 - k^2) C_{j-1}
                                 - ((sigma+2(j-2)b)^2 - k^2) C_{j-2},

with the C_{j-2} term absent at j = 1.  At lambda = 2 and sigma = k the
coefficients collapse to the closed form C_j = (-1)^j * 2b/(k+b) * C_0.

If beta, lambda and C_0 are rational (and sigma integral or rational) the
recursion runs in exact Fraction arithmetic; otherwise in double precision.
A vanishing indicial factor at some step would require log terms and raises
ResonantIndicial instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IndicialDegeneracy, ResonantIndicial, TruncationInsufficient


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class RadialProblem:
    """One Fourier mode of the radial eigenvalue equation."""

    beta: object
    k: int
    lam: object

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")

    @property
    def exact(self) -> bool:
        return _is_rational(self.beta) and _is_rational(self.lam)


@dataclass(frozen=True)
class RadialSeries:
    """Truncated Frobenius solution: coefficients C_0..C_N on exponents sigma + 2 j beta."""

    problem: RadialProblem
    sigma: object
    coeffs: tuple

    @property
    def exact(self) -> bool:
        return self.problem.exact and _is_rational(self.sigma) and all(
            _is_rational(c) for c in self.coeffs)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def exponent(self, j: int):
        return self.sigma + 2 * j * self.problem.beta


def build_series(problem: RadialProblem, sigma, c0=None, n_terms: int = 80) -> RadialSeries:
    """Run the coefficient recursion from C_0 (default 1) up to C_{n_terms}."""
    exact = problem.exact and _is_rational(sigma) and (c0 is None or _is_rational(c0))
    if exact:
        beta, lam, sig = Fraction(problem.beta), Fraction(problem.lam), Fraction(sigma)
        c0 = Fraction(1) if c0 is None else Fraction(c0)
        zero_tol = None
    else:
        beta, lam, sig = float(problem.beta), float(problem.lam), float(sigma)
        c0 = 1.0 if c0 is None else float(c0)
        zero_tol = 1e-12
    if c0 == 0:
        raise ValueError("normalization C_0 must be nonzero")
    k2 = problem.k * problem.k

    def indicial(exp):
        return exp * exp - k2

    coeffs = [c0]
    for j in range(1, n_terms + 1):
        denom = indicial(sig + 2 * j * beta)
        if (denom == 0) if exact else (abs(denom) <= zero_tol * (abs(sig + 2 * j * beta) ** 2 + k2 + 1)):
            raise ResonantIndicial(j)
        rhs = (-4 * lam * beta * beta - 2 * indicial(sig + 2 * (j - 1) * beta)) * coeffs[j - 1]
        if j >= 2:
            rhs -= indicial(sig + 2 * (j - 2) * beta) * coeffs[j - 2]
        coeffs.append(rhs / denom)
    return RadialSeries(problem, sig, tuple(coeffs))


def closed_form_lambda2(beta, k: int, c0, j: int):
    """C_j = (-1)^j * 2 beta / (k + beta) * C_0 for j >= 1 (lambda = 2, sigma = k branch)."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if j == 0:
        return c0
    if k + beta == 0:
        raise IndicialDegeneracy("k + beta = 0")
    if _is_rational(beta) and _is_rational(c0):
        return (-1) ** j * Fraction(2) * Fraction(beta) / (k + Fraction(beta)) * Fraction(c0)
    return (-1) ** j * 2.0 * float(beta) / (k + float(beta)) * float(c0)


def tail_estimate(series: RadialSeries, r: float):
    """Geometric bound on the dropped tail, from the ratio of the last few coefficients.

    Returns math.inf when the ratio test gives no contraction at this radius.
    """
    beta = float(series.problem.beta)
    sigma = float(series.sigma)
    coeffs = [float(c) for c in series.coeffs]
    n = len(coeffs) - 1
    u = r ** (2 * beta)
    ratios = []
    for j in range(max(1, n - 4), n + 1):
        if coeffs[j - 1] != 0:
            ratios.append(abs(coeffs[j] / coeffs[j - 1]))
    if not ratios:
        return 0.0
    q = max(ratios)
    if q * u >= 1.0:
        return float("inf")
    next_term = q * abs(coeffs[n]) * u ** (n + 1)
    return (r ** sigma) * next_term / (1.0 - q * u)


def evaluate(series: RadialSeries, r: float, tol: float = 1e-12):
    """Value and radial derivative of the truncated series at r > 0.

    Requires the tail bound at r to sit below tol; otherwise raises
    TruncationInsufficient (no resummation of divergent tails is attempted).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    tail = tail_estimate(series, r)
    if not (tail < tol):
        raise TruncationInsufficient(
            f"tail estimate {tail:.3e} at r={r} exceeds tolerance {tol:.1e}")
    beta = float(series.problem.beta)
    sigma = float(series.sigma)
    coeffs = [float(c) for c in series.coeffs]
    u = r ** (2 * beta)
    value = 0.0
    deriv_sum = 0.0  # sum of C_j (sigma + 2 j beta) u^j, Horner in u
    for j in range(len(coeffs) - 1, -1, -1):
        value = value * u + coeffs[j]
        deriv_sum = deriv_sum * u + coeffs[j] * (sigma + 2 * j * beta)
    return (r ** sigma) * value, (r ** (sigma - 1)) * deriv_sum
