"""Dense finite-difference reference eigensolver, independent of the shooting code.

In the variable x = cos(geodesic radius) the mode-k radial operator becomes
the associated-Legendre type operator

    L = -(1 - x^2) d^2/dx^2 + 2 x d/dx + mu^2 / (1 - x^2),   mu = k / beta.

Substituting out the admissible endpoint behavior leaves a bounded unknown v:

* regular modes, phi = (1 - x^2)^(mu/2) v with mu = |k|/beta:
      -(1 - x^2) v'' + 2 (mu + 1) x v' + mu (mu + 1) v = lam v
* coupled holomorphic modes, phi = ((1-x)/(1+x))^(mu/2) v with mu = k/beta
  (the operator pair is symmetric under x -> -x together with mu -> -mu,
  so |k| can be used):
      -(1 - x^2) v'' + 2 (x + mu) v' = lam v

Both are self-adjoint against the weight W equal to the square of the
substituted factor, a Jacobi-type weight.  The discretization is a
conservative finite-volume scheme on a uniform grid: edge fluxes
p = (1 - x^2) W at cell interfaces (zero through the true endpoints, where p
vanishes) and exact cell masses of W, which keeps the scheme accurate even
when W is unbounded at an endpoint (mu < 1 always holds here).
"""

from __future__ import annotations

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal

from .extensions import ExtensionType, singular_count

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _cell_masses(weight_fn, edges: np.ndarray) -> np.ndarray:
    """Per-cell integrals of the weight by an 8-node Gauss rule, vectorized."""
    mids = 0.5 * (edges[1:] + edges[:-1])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    masses = np.zeros(mids.size)
    for node, gw in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
        masses += gw * weight_fn(mids + halfs * node)
    return masses * halfs


def reference_eigenvalues(beta, k: int, extension: ExtensionType,
                          num_points: int = 2000, num_eigs: int = 40) -> np.ndarray:
    """Lowest eigenvalues of the mode-k problem on a dense grid in x = cos(geodesic r)."""
    beta = float(beta)
    j = singular_count(beta)
    coupled = extension is ExtensionType.HOLOMORPHIC and 1 <= abs(k) <= j
    mu = abs(k) / beta

    h = 2.0 / (num_points + 1)
    x = -1.0 + h * np.arange(1, num_points + 1)
    edges = np.empty(num_points + 1)
    edges[0] = -1.0
    edges[-1] = 1.0
    edges[1:-1] = 0.5 * (x[1:] + x[:-1])

    if coupled:
        def weight(t):
            return ((1.0 - t) / (1.0 + t)) ** mu
        shift = 0.0
    else:
        def weight(t):
            return (1.0 - t * t) ** mu
        shift = mu * (mu + 1.0)

    masses = _cell_masses(weight, edges)
    if coupled and mu > 0:
        # the left boundary cell carries an integrable (1+x)^(-mu) singularity;
        # integrate it with the algebraic-endpoint-weight rule instead
        span = edges[1] + 1.0
        value, _ = integrate.quad(lambda u: (2.0 - u) ** mu, 0.0, span,
                                  weight="alg", wvar=(-mu, 0.0))
        masses[0] = value

    p_interior = (1.0 - edges[1:-1] ** 2) * weight(edges[1:-1])

    diag = np.zeros(num_points)
    diag[:-1] += p_interior / h
    diag[1:] += p_interior / h
    diag += shift * masses
    off = -p_interior / h

    scale = 1.0 / np.sqrt(masses)
    diag_s = diag * scale * scale
    off_s = off * scale[:-1] * scale[1:]
    num_eigs = min(num_eigs, num_points)
    vals = eigh_tridiagonal(diag_s, off_s, select="i",
                            select_range=(0, num_eigs - 1), eigvals_only=True)
    return vals
