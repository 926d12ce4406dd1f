"""Boundary coefficients of self-adjoint extensions at cone points.

Near a cone of angle 2*pi*beta the maximal domain of the Laplacian carries,
per Fourier mode k with |k| <= J, a pair of coefficients: one on the bounded
branch r^{|k|} e^{ik theta} and one on the singular branch r^{-|k|} e^{ik theta}
(log r for k = 0).  Self-adjoint extensions correspond to Lagrangian subspaces
of the coefficient space under the pairing

    Omega(A, A') = <A_plus, A'_minus> - <A_minus, A'_plus>.

All exponents here use the conformal scale r = |z|; the geodesic scale
differs by the power 1/beta and is never mixed in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import LayoutMismatch


class ExtensionType(Enum):
    FRIEDRICHS = "friedrichs"
    HOLOMORPHIC = "holomorphic"


def _is_integral(beta) -> bool:
    if isinstance(beta, Fraction):
        return beta.denominator == 1
    if isinstance(beta, int):
        return True
    return float(beta) == int(beta)


def singular_count(beta) -> int:
    """Number J of singular mode indices per sign: floor(beta), or beta - 1 for integer beta."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if _is_integral(beta):
        return int(beta) - 1
    return math.floor(beta)


def admissible_leading_exponent(extension: ExtensionType, beta, k: int) -> int:
    """Leading exponent sigma (in the r = |z| scale) of an admissible mode-k solution.

    Friedrichs admits only bounded branches, sigma = |k|.  The holomorphic
    extension admits the pure z^k branch for |k| <= J, so sigma = k there
    (negative for negative k); beyond J square-integrability forces |k|.
    """
    j = singular_count(beta)
    if extension is ExtensionType.HOLOMORPHIC and abs(k) <= j:
        return k
    return abs(k)


@dataclass(frozen=True)
class SingularCoefficientLayout:
    """Coefficient bookkeeping for one or more cone points.

    betas holds one angle parameter per cone; each cone contributes blocks of
    2J+1 entries (modes -J..J) to both the bounded (a) and singular (b) sides.
    """

    betas: tuple
    js: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "js", tuple(singular_count(b) for b in self.betas))

    @property
    def n_cones(self) -> int:
        return len(self.betas)

    def block_size(self, i: int) -> int:
        return 2 * self.js[i] + 1

    @property
    def side_dimension(self) -> int:
        """Entries in one of the two blocks (a or b), all cones concatenated."""
        return sum(self.block_size(i) for i in range(self.n_cones))

    @property
    def ambient_dimension(self) -> int:
        return 2 * self.side_dimension

    def offset(self, cone: int) -> int:
        return sum(self.block_size(i) for i in range(cone))

    def index(self, cone: int, k: int) -> int:
        if abs(k) > self.js[cone]:
            raise LayoutMismatch(f"mode {k} outside [-J, J] for cone {cone}")
        return self.offset(cone) + k + self.js[cone]


def layout_for(beta, n_cones: int = 1) -> SingularCoefficientLayout:
    return SingularCoefficientLayout(tuple([beta] * n_cones))


@dataclass
class CoefficientVector:
    """Concatenated (a, b) coefficient blocks over all cones of a layout."""

    layout: SingularCoefficientLayout
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def zeros(cls, layout: SingularCoefficientLayout) -> "CoefficientVector":
        n = layout.side_dimension
        return cls(layout, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))

    @classmethod
    def basis(cls, layout: SingularCoefficientLayout, cone: int, block: str, k: int) -> "CoefficientVector":
        v = cls.zeros(layout)
        idx = layout.index(cone, k)
        if block == "a":
            v.a[idx] = 1.0
        elif block == "b":
            v.b[idx] = 1.0
        else:
            raise ValueError("block must be 'a' or 'b'")
        return v

    def flat(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])


def symplectic_pairing(first: CoefficientVector, second: CoefficientVector) -> complex:
    """Omega(A, A') = sum_k (a_k conj(b'_k) - b_k conj(a'_k))."""
    if first.layout != second.layout or first.a.shape != second.a.shape:
        raise LayoutMismatch("coefficient vectors over different layouts")
    return complex(np.sum(first.a * np.conj(second.b)) - np.sum(first.b * np.conj(second.a)))


def extension_subspace(extension: ExtensionType, layout: SingularCoefficientLayout):
    """Basis of the coefficient subspace cut out by the extension at every cone.

    Friedrichs keeps every bounded coefficient and kills the singular block.
    The holomorphic extension keeps a_k for k >= 0 and b_k for k < 0: exactly
    the coefficients multiplying pure powers z^k, -J <= k <= J.
    """
    basis = []
    for cone in range(layout.n_cones):
        j = layout.js[cone]
        if extension is ExtensionType.FRIEDRICHS:
            for k in range(-j, j + 1):
                basis.append(CoefficientVector.basis(layout, cone, "a", k))
        else:
            for k in range(0, j + 1):
                basis.append(CoefficientVector.basis(layout, cone, "a", k))
            for k in range(-j, 0):
                basis.append(CoefficientVector.basis(layout, cone, "b", k))
    return basis


def is_lagrangian(basis, layout: SingularCoefficientLayout, tol: float = 1e-12) -> bool:
    """Isotropic under the pairing and of half the ambient dimension (as a rank check)."""
    if not basis:
        return layout.ambient_dimension == 0
    mat = np.stack([v.flat() for v in basis])
    rank = np.linalg.matrix_rank(mat, tol=1e-10)
    if rank != len(basis) or 2 * len(basis) != layout.ambient_dimension:
        return False
    for i, v in enumerate(basis):
        for w in basis[i:]:
            if abs(symplectic_pairing(v, w)) > tol:
                return False
    return True
