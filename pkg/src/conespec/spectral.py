"""Shooting solver for the mode-decomposed eigenproblem on two-cone spheres.

Each Fourier mode k of the eigenvalue equation reduces to the radial ODE

    r^2 phi'' + r phi' - k^2 phi = -4 lam b^2 r^(2b) / (1 + r^(2b))^2 phi

on (0, infinity).  Solutions are seeded near r = 0 by a Frobenius series with
the leading exponent admissible for the chosen self-adjoint extension and
carried to the equator r = 1 by a high-order adaptive integrator.  The cone
at infinity is handled through the r -> 1/r symmetry of the catalog density:

* Friedrichs modes, holomorphic modes with |k| > J, and mode 0 admit the same
  condition at both cones, so eigenfunctions split by parity and the two
  matching residuals are the value and the radial derivative at r = 1.
* Holomorphic modes with 1 <= |k| <= J prescribe the pure z^k branch at both
  cones.  These conditions are swapped, not preserved, by the reflection, so
  the correct matching couples the two Frobenius branches u (sigma = k) and
  g (sigma = -k): lam is an eigenvalue iff the Wronskian of u and g(1/r)
  vanishes at the equator, i.e. (u * g)'(1) = 0.

Scans bracket sign changes of each residual on a lambda grid (whole grids are
shot as one vectorized ODE system) and refine brackets by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (DimensionOutOfTheorem, IntegrationFailure, NonRadialMetric,
                     SuspectedDoubleRoot)
from .extensions import ExtensionType, admissible_leading_exponent, singular_count
from .frobenius import RadialProblem, build_series, tail_estimate
from .metric import Football, PowerCover


@dataclass(frozen=True)
class ModeSpectralProblem:
    """One mode's eigenvalue search: parameters, lambda window and tolerances."""

    beta: object
    k: int
    extension: ExtensionType
    lambda_lo: float = 0.05
    lambda_hi: float = 30.0
    rel_tol: float = 1e-11
    root_tol: float = 1e-10
    grid_step: float = 0.05
    n_terms: int = 80

    def __post_init__(self):
        if self.lambda_lo < 0 or self.lambda_hi <= self.lambda_lo:
            raise ValueError("need 0 <= lambda_lo < lambda_hi")


@dataclass(frozen=True)
class EigenvalueHit:
    lam: float
    parity: str  # "anti" | "sym" | "mixed"
    residual: float


@dataclass(frozen=True)
class EigenvalueReport:
    """Scan results per mode plus the smallest positive eigenvalue found."""

    beta: object
    extension: ExtensionType
    modes: dict
    lambda1: float


def _sigma_for(problem: ModeSpectralProblem) -> int:
    return admissible_leading_exponent(problem.extension, problem.beta, problem.k)


def _is_coupled_mode(problem: ModeSpectralProblem) -> bool:
    j = singular_count(problem.beta)
    return problem.extension is ExtensionType.HOLOMORPHIC and 1 <= abs(problem.k) <= j


def _series_table(beta: float, k: int, sigma: float, lams: np.ndarray, n_terms: int) -> np.ndarray:
    """Frobenius coefficients, vectorized over lambda: shape (n_terms+1, len(lams))."""
    coeffs = np.zeros((n_terms + 1, lams.size))
    coeffs[0] = 1.0
    k2 = float(k * k)
    for j in range(1, n_terms + 1):
        denom = (sigma + 2 * j * beta) ** 2 - k2
        rhs = (-4.0 * beta * beta * lams - 2.0 * ((sigma + 2 * (j - 1) * beta) ** 2 - k2)) * coeffs[j - 1]
        if j >= 2:
            rhs -= ((sigma + 2 * (j - 2) * beta) ** 2 - k2) * coeffs[j - 2]
        coeffs[j] = rhs / denom
    return coeffs


def _series_eval(coeffs: np.ndarray, sigma: float, beta: float, r: float):
    """Value and derivative of each column's series at radius r."""
    u = r ** (2 * beta)
    n = coeffs.shape[0] - 1
    value = np.zeros(coeffs.shape[1])
    dsum = np.zeros(coeffs.shape[1])
    for j in range(n, -1, -1):
        value = value * u + coeffs[j]
        dsum = dsum * u + coeffs[j] * (sigma + 2 * j * beta)
    return (r ** sigma) * value, (r ** (sigma - 1)) * dsum


def _series_tail_ok(coeffs: np.ndarray, sigma: float, beta: float, r: float, tol: float) -> bool:
    u = r ** (2 * beta)
    n = coeffs.shape[0] - 1
    last = np.abs(coeffs[-5:])
    prev = np.abs(coeffs[-6:-1])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(prev > 0, last / np.maximum(prev, 1e-300), 0.0)
    q = float(np.max(ratios))
    if q * u >= 0.9:
        return False
    tail = (r ** sigma) * q * float(np.max(np.abs(coeffs[n]))) * u ** (n + 1) / (1.0 - q * u)
    return tail < tol


def _shoot_batch(beta, k: int, sigma: int, lams, rel_tol: float = 1e-11, n_terms: int = 80):
    """Solutions with leading behavior r^sigma, integrated to r = 1 for every lambda.

    Returns (values, derivatives) arrays aligned with lams.
    """
    beta = float(beta)
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    coeffs = _series_table(beta, k, float(sigma), lams, n_terms)
    r0 = 0.3
    while not _series_tail_ok(coeffs, sigma, beta, r0, 0.01 * rel_tol) and r0 > 0.05:
        r0 *= 0.8
    v0, d0 = _series_eval(coeffs, float(sigma), beta, r0)
    y0 = np.concatenate([v0, d0])
    nlam = lams.size
    k2 = float(k * k)
    two_beta = 2 * beta

    def rhs(r, y):
        phi = y[:nlam]
        dphi = y[nlam:]
        rb = r ** two_beta
        weight = 4.0 * beta * beta * rb / ((1.0 + rb) ** 2 * r * r)
        return np.concatenate([dphi, -dphi / r + (k2 / (r * r) - lams * weight) * phi])

    sol = solve_ivp(rhs, (r0, 1.0), y0, method="DOP853",
                    rtol=rel_tol, atol=1e-14, dense_output=False)
    if not sol.success:
        raise IntegrationFailure(f"DOP853 failed for beta={beta}, k={k}: {sol.message}")
    return sol.y[:nlam, -1].copy(), sol.y[nlam:, -1].copy()


def shoot_to_equator(problem: ModeSpectralProblem, lam: float, sigma=None):
    """(value, derivative) at r = 1 of the admissible solution, normalized to C_0 = 1."""
    if sigma is None:
        sigma = _sigma_for(problem)
    vals, ders = _shoot_batch(problem.beta, problem.k, sigma, [lam],
                              rel_tol=problem.rel_tol, n_terms=problem.n_terms)
    return float(vals[0]), float(ders[0])


def matching_values(problem: ModeSpectralProblem, lam: float):
    """(dirichlet_residual, neumann_residual): value and derivative of the shot solution at r = 1.

    Both vanish-at-a-root only for the parity-split problems; coupled
    holomorphic modes use the Wronskian residual from coupled_residual.
    """
    return shoot_to_equator(problem, lam)


def coupled_residual(problem: ModeSpectralProblem, lam: float) -> float:
    """(u g)'(1) for the two Frobenius branches u (sigma=k) and g (sigma=-k)."""
    k = problem.k
    uv, ud = _shoot_batch(problem.beta, k, k, [lam], problem.rel_tol, problem.n_terms)
    gv, gd = _shoot_batch(problem.beta, k, -k, [lam], problem.rel_tol, problem.n_terms)
    return float(uv[0] * gd[0] + ud[0] * gv[0])


def _residual_branches(problem: ModeSpectralProblem):
    """Named residual functions of a lambda array; zeros are the mode's eigenvalues."""
    beta, k = problem.beta, problem.k
    if _is_coupled_mode(problem):
        def wronskian(lams):
            uv, ud = _shoot_batch(beta, k, k, lams, problem.rel_tol, problem.n_terms)
            gv, gd = _shoot_batch(beta, k, -k, lams, problem.rel_tol, problem.n_terms)
            return uv * gd + ud * gv

        return {"mixed": wronskian}

    sigma = _sigma_for(problem)

    def dirichlet(lams):
        return _shoot_batch(beta, k, sigma, lams, problem.rel_tol, problem.n_terms)[0]

    def neumann(lams):
        return _shoot_batch(beta, k, sigma, lams, problem.rel_tol, problem.n_terms)[1]

    return {"anti": dirichlet, "sym": neumann}


def _bisect_brackets(res_fn, lo, hi, f_lo, max_iter: int = 60):
    """Vectorized bisection on sign-change brackets; returns (roots, |residual|)."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    f_lo = np.asarray(f_lo, dtype=float).copy()
    mid = 0.5 * (lo + hi)
    fm = res_fn(mid)
    for _ in range(max_iter):
        same = np.sign(fm) == np.sign(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, fm, f_lo)
        hi = np.where(same, hi, mid)
        mid = 0.5 * (lo + hi)
        if np.all(hi - lo < 1e-14 * np.maximum(1.0, np.abs(mid))):
            break
        fm = res_fn(mid)
    return mid, np.abs(res_fn(mid))


def eigenvalue_scan(problem: ModeSpectralProblem):
    """All eigenvalues of the mode in [lambda_lo, lambda_hi], with parity tags.

    A residual local minimum below sqrt(root_tol) that produces no sign change
    raises SuspectedDoubleRoot rather than guessing a multiplicity.
    """
    grid = np.arange(problem.lambda_lo, problem.lambda_hi + 0.5 * problem.grid_step,
                     problem.grid_step)
    hits = []
    for parity, res_fn in _residual_branches(problem).items():
        f = res_fn(grid)
        scale = float(np.median(np.abs(f))) + 1e-300
        signs = np.sign(f)
        bracket_nodes = set()
        los, his, flos = [], [], []
        for i in range(len(grid) - 1):
            if signs[i] == 0:
                hits.append(EigenvalueHit(float(grid[i]), parity, float(abs(f[i]))))
                bracket_nodes.update((i - 1, i, i + 1))
            elif signs[i + 1] != 0 and signs[i] != signs[i + 1]:
                los.append(grid[i])
                his.append(grid[i + 1])
                flos.append(f[i])
                bracket_nodes.update((i, i + 1))
        if signs[-1] == 0:
            hits.append(EigenvalueHit(float(grid[-1]), parity, float(abs(f[-1]))))
            bracket_nodes.update((len(grid) - 2, len(grid) - 1))
        if los:
            roots, residuals = _bisect_brackets(res_fn, los, his, flos)
            for lam, res in zip(roots, residuals):
                hits.append(EigenvalueHit(float(lam), parity, float(res)))
        # tangency guard: small residual with no sign change nearby
        for i in range(1, len(grid) - 1):
            if i in bracket_nodes or (i - 1) in bracket_nodes or (i + 1) in bracket_nodes:
                continue
            if (abs(f[i]) < math.sqrt(problem.root_tol) * scale
                    and abs(f[i]) <= abs(f[i - 1]) and abs(f[i]) <= abs(f[i + 1])):
                raise SuspectedDoubleRoot(
                    f"residual dip without sign change near lambda={grid[i]:.4f} "
                    f"(beta={problem.beta}, k={problem.k}, {parity})")
    if problem.k == 0 and problem.lambda_lo <= 0.0:
        hits.append(EigenvalueHit(0.0, "sym", 0.0))
    hits.sort(key=lambda h: (h.lam, h.parity))
    deduped = []
    for hit in hits:
        if deduped and hit.parity == deduped[-1].parity and \
                abs(hit.lam - deduped[-1].lam) < max(problem.root_tol, 1e-12):
            continue
        deduped.append(hit)
    return deduped


def spectrum_report(beta, extension: ExtensionType, k_max: int,
                    lambda_lo: float = 0.05, lambda_hi: float = 30.0,
                    **tols) -> EigenvalueReport:
    """Scan modes 0..k_max (negative modes are degenerate mirrors) and collect lambda_1."""
    modes = {}
    smallest = math.inf
    for k in range(0, k_max + 1):
        problem = ModeSpectralProblem(beta=beta, k=k, extension=extension,
                                      lambda_lo=lambda_lo, lambda_hi=lambda_hi, **tols)
        mode_hits = eigenvalue_scan(problem)
        modes[k] = mode_hits
        for hit in mode_hits:
            if hit.lam > 1e-12:
                smallest = min(smallest, hit.lam)
    return EigenvalueReport(beta=beta, extension=extension, modes=modes,
                            lambda1=smallest)


def lambda1(beta, extension: ExtensionType, k_max: int | None = None,
            lambda_max: float = 30.0, **tols) -> float:
    """Least positive eigenvalue over modes |k| <= k_max within (0, lambda_max]."""
    j = singular_count(beta)
    if k_max is None:
        k_max = j + 2
    if k_max < j + 2:
        raise ValueError("k_max must cover all singular modes plus margin (J + 2)")
    report = spectrum_report(beta, extension, k_max, lambda_hi=lambda_max, **tols)
    if not math.isfinite(report.lambda1):
        raise IntegrationFailure("no eigenvalue found in the scan window")
    return report.lambda1


def _beta_is_integral(beta) -> bool:
    return float(beta) == int(float(beta))


def _radial_order(spec) -> object:
    if isinstance(spec, Football):
        return spec.beta
    if isinstance(spec, PowerCover):
        if not spec.radial:
            raise NonRadialMetric(
                "mode decomposition needs a rotation-invariant density; "
                "non-unitary Moebius factors change the metric")
        return spec.n
    raise TypeError(f"not a catalog metric: {spec!r}")


def has_eigenvalue_two(beta, k: int, extension: ExtensionType, window: float = 0.25,
                        tol: float = 1e-6, **tols) -> bool:
    problem = ModeSpectralProblem(beta=beta, k=k, extension=extension,
                                  lambda_lo=2.0 - window, lambda_hi=2.0 + window,
                                  grid_step=0.05, **tols)
    return any(abs(h.lam - 2.0) < tol for h in eigenvalue_scan(problem))


def real_two_eigenspace_dimension(spec, k_max: int | None = None, **tols) -> int:
    """Dimension of the space of real eigenfunctions with eigenvalue 2 (holomorphic extension).

    Real elements of the holomorphic domain cannot carry modes 1 <= |k| <= J
    (the conjugate of a pure z^k term is a zbar^k term, which the domain
    excludes), so the count is 1 for the rotationally invariant eigenfunction
    plus 2 for every mode k > J whose regular problem hits eigenvalue 2.
    """
    beta = _radial_order(spec)
    j = singular_count(beta)
    if k_max is None:
        k_max = j + 2
    if not has_eigenvalue_two(beta, 0, ExtensionType.HOLOMORPHIC, **tols):
        raise DimensionOutOfTheorem(
            "mode 0 lost the canonical eigenvalue 2; shooting solver is inconsistent")
    extra_modes = [k for k in range(j + 1, k_max + 1)
                   if has_eigenvalue_two(beta, k, ExtensionType.HOLOMORPHIC, **tols)]
    dim = 1 + 2 * len(extra_modes)
    if dim not in (1, 3):
        raise DimensionOutOfTheorem(f"computed dimension {dim} outside {{1, 3}}")
    if (dim == 3) != _beta_is_integral(beta):
        raise DimensionOutOfTheorem(
            f"dimension {dim} inconsistent with monodromy (beta={beta})")
    return dim
