"""Small rational-function algebra used by the vector-field and one-form code.

Polynomials are numpy arrays of complex coefficients in ascending order.
Root extraction clusters nearby numerical roots into multiplicities, which is
all the catalog fields need (degrees stay in the single digits).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def poly_trim(c, rel: float = 1e-12) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > rel * scale)[0]
    if keep.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: keep[-1] + 1]


def poly_mul(p, q) -> np.ndarray:
    return poly_trim(np.convolve(np.asarray(p, complex), np.asarray(q, complex)))


def poly_add(p, q) -> np.ndarray:
    p = np.atleast_1d(np.asarray(p, complex))
    q = np.atleast_1d(np.asarray(q, complex))
    out = np.zeros(max(p.size, q.size), dtype=complex)
    out[: p.size] += p
    out[: q.size] += q
    return poly_trim(out)


def poly_sub(p, q) -> np.ndarray:
    return poly_add(p, -np.atleast_1d(np.asarray(q, complex)))


def poly_eval(c, z):
    c = np.asarray(c, dtype=complex)
    result = np.zeros_like(np.asarray(z, dtype=complex))
    for coeff in c[::-1]:
        result = result * z + coeff
    return result


def poly_derivative(c) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.size <= 1:
        return np.zeros(1, dtype=complex)
    return poly_trim(c[1:] * np.arange(1, c.size))


def poly_degree(c) -> int:
    return poly_trim(c).size - 1


def poly_is_zero(c) -> bool:
    c = np.asarray(c, dtype=complex)
    return bool(np.all(np.abs(c) <= 1e-14 * max(1.0, np.max(np.abs(c), initial=0.0))))


def clustered_roots(c, tol: float = 1e-7):
    """Roots of the polynomial grouped into (root, multiplicity) clusters."""
    c = poly_trim(c)
    if c.size <= 1:
        return []
    raw = np.roots(c[::-1])
    clusters = []
    for r in sorted(raw, key=lambda x: (round(x.real, 6), round(x.imag, 6))):
        for idx, (center, mult) in enumerate(clusters):
            if abs(r - center) <= tol * max(1.0, abs(center)):
                clusters[idx] = ((center * mult + r) / (mult + 1), mult + 1)
                break
        else:
            clusters.append((r, 1))
    return clusters


@dataclass(frozen=True)
class RationalFunction:
    """num(z) / den(z) with complex polynomial coefficients (ascending)."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "num", poly_trim(self.num))
        object.__setattr__(self, "den", poly_trim(self.den))
        if poly_is_zero(self.den):
            raise ZeroDivisionError("zero denominator polynomial")

    def __call__(self, z):
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def scaled(self, factor: complex) -> "RationalFunction":
        return RationalFunction(self.num * complex(factor), self.den)

    def reciprocal(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    @property
    def degree_at_infinity(self) -> int:
        """Order of vanishing at infinity as a function: deg(den) - deg(num)."""
        return poly_degree(self.den) - poly_degree(self.num)

    def cancelled(self, tol: float = 1e-7) -> "RationalFunction":
        """Remove common root clusters of numerator and denominator."""
        num_roots = clustered_roots(self.num, tol)
        den_roots = clustered_roots(self.den, tol)
        num_lead = poly_trim(self.num)[-1]
        den_lead = poly_trim(self.den)[-1]
        for j, (dr, dm) in enumerate(den_roots):
            for i, (nr, nm) in enumerate(num_roots):
                if nm > 0 and abs(dr - nr) <= 10 * tol * max(1.0, abs(dr)):
                    common = min(dm, nm)
                    num_roots[i] = (nr, nm - common)
                    den_roots[j] = (dr, dm - common)
                    break

        def rebuild(lead, roots):
            poly = np.array([lead], dtype=complex)
            for r, m in roots:
                for _ in range(m):
                    poly = poly_mul(poly, np.array([-r, 1.0]))
            return poly

        return RationalFunction(rebuild(num_lead, num_roots), rebuild(den_lead, den_roots))
