"""Character one-forms, residues, divisors and developing-map reconstruction.

Writing the eigenvalue-2 vector field as X = (1/4) F(z) d/dz, the one-form

    omega = -2 C dz / F

(C the extremal constant of the eigenfunction) has only simple poles with
real residues on the catalog; exp of its path integral reconstructs a
multiplicative developing map, whose monodromy around a pole P is the factor
exp(2 pi i Res_P).  All-integer residues therefore mean trivial monodromy.

Two access paths: exact-ish rational arithmetic on numerator/denominator
polynomials (catalog closed-form fields) and trapezoid contour quadrature on
small circles for sampled fields.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (NonRealResidue, NonSimplePole, PathThroughSingularity,
                     ZeroField)
from .metric import canonical_eigenfunction, cone_divisor, density
from .moebius import INFINITY, is_infinity
from .ratfunc import (RationalFunction, clustered_roots, poly_degree,
                      poly_derivative, poly_eval, poly_is_zero)

_RESIDUE_IMAG_TOL = 1e-9
_CLEARANCE = 1e-3


class Monodromy(Enum):
    TRIVIAL = "trivial"
    REDUCIBLE_U1 = "u1"


@dataclass(frozen=True)
class DivisorEntry:
    """Point with its order in the divisor of omega (poles are order -1) and residue."""

    point: object
    order: int
    residue: float | None = None


@dataclass(frozen=True)
class CharacterOneForm:
    """omega = coefficient(z) dz with a rational coefficient."""

    coefficient: RationalFunction

    def __call__(self, z):
        return self.coefficient(z)

    @property
    def order_at_infinity(self) -> int:
        """Order of omega at infinity: deg(den) - deg(num) - 2 (one-form transformation)."""
        return poly_degree(self.coefficient.den) - poly_degree(self.coefficient.num) - 2


def one_form_from_field(field: RationalFunction, extremal_constant: float) -> CharacterOneForm:
    """omega = -2 C dz / F for F = 4 X^z."""
    if poly_is_zero(field.num):
        raise ZeroField("vector field is identically zero")
    coeff = RationalFunction(-0.5 * float(extremal_constant) * field.den,
                             field.num).cancelled()
    return CharacterOneForm(coeff)


def residues(form: CharacterOneForm):
    """All residues of omega, the point at infinity included; asserted real.

    Finite residues come from num(p)/den'(p) at simple denominator roots;
    the residue at infinity balances the finite sum.  A multiple pole raises
    NonSimplePole, a residue with a large imaginary part NonRealResidue.
    """
    coeff = form.coefficient.cancelled()
    out = []
    total = 0.0 + 0.0j
    dden = poly_derivative(coeff.den)
    for root, mult in clustered_roots(coeff.den):
        if mult > 1:
            raise NonSimplePole(f"pole of order {mult} at {root}")
        value = poly_eval(coeff.num, root) / poly_eval(dden, root)
        total += value
        out.append((root, _real_residue(value, root)))
    inf_order = poly_degree(coeff.den) - poly_degree(coeff.num) - 2
    if inf_order == -1:
        out.append((INFINITY, _real_residue(-total, INFINITY)))
    elif inf_order < -1:
        raise NonSimplePole(f"pole of order {-inf_order} at infinity")
    return out


def _real_residue(value: complex, point) -> float:
    if abs(value.imag) > _RESIDUE_IMAG_TOL * max(1.0, abs(value.real)):
        raise NonRealResidue(f"residue {value} at {point} is not real")
    return float(value.real)


def contour_residue(fn, center: complex, radius: float, num_points: int = 256) -> complex:
    """Trapezoid contour integral (1/2 pi i) oint fn dz on a circle; spectrally accurate."""
    angles = 2.0 * math.pi * np.arange(num_points) / num_points
    points = center + radius * np.exp(1j * angles)
    values = np.array([fn(z) for z in points], dtype=complex)
    # (1/2 pi i) * integral = (1/2 pi i) * sum fn(z_j) * i radius e^{i t_j} dt
    return complex(np.mean(values * (points - center)))


def divisor(form: CharacterOneForm):
    """Zeros and poles of omega as DivisorEntry items, infinity included."""
    coeff = form.coefficient.cancelled()
    entries = []
    res = dict()
    for point, value in residues(form):
        res[_point_key(point)] = value
    for root, mult in clustered_roots(coeff.num):
        entries.append(DivisorEntry(root, mult))
    for root, mult in clustered_roots(coeff.den):
        entries.append(DivisorEntry(root, -mult, res.get(_point_key(root))))
    inf_order = form.order_at_infinity
    if inf_order != 0:
        entries.append(DivisorEntry(INFINITY, inf_order, res.get("inf")))
    return entries


def _point_key(point):
    if is_infinity(point):
        return "inf"
    z = complex(point)
    return (round(z.real, 6), round(z.imag, 6))


def _same_point(p, q, tol: float = 1e-6) -> bool:
    if is_infinity(p) or is_infinity(q):
        return is_infinity(p) and is_infinity(q)
    return abs(complex(p) - complex(q)) <= tol


@dataclass(frozen=True)
class DivisorReport:
    passed: bool
    degree: int
    entries: tuple
    mismatches: tuple


def divisor_relation_check(form: CharacterOneForm, spec, tol: float = 1e-8) -> DivisorReport:
    """Check D = (omega)_0 + sum over poles (|Res| - 1)[P] entry-wise, plus deg(omega) = -2.

    The contribution of omega at each point of the sphere is its zero order
    there, or |Res| - 1 at a simple pole; every point must match the metric's
    cone divisor (coefficient beta - 1 at the cones, 0 elsewhere).
    """
    entries = divisor(form)
    degree = sum(e.order for e in entries)
    cones = cone_divisor(spec)
    mismatches = []

    def metric_weight(point) -> float:
        for cone_point, weight in cones:
            if _same_point(point, cone_point):
                return float(weight)
        return 0.0

    seen_points = []
    for e in entries:
        if e.order > 0:
            contribution = float(e.order)
        else:
            contribution = abs(e.residue) - 1.0
        target = metric_weight(e.point)
        if abs(contribution - target) > tol:
            mismatches.append((e.point, contribution, target))
        seen_points.append(e.point)
    # cones that omega misses entirely must carry weight 0
    for cone_point, weight in cones:
        if not any(_same_point(cone_point, p) for p in seen_points):
            if abs(float(weight)) > tol:
                mismatches.append((cone_point, 0.0, float(weight)))
    passed = (degree == -2) and not mismatches
    return DivisorReport(passed=passed, degree=degree, entries=tuple(entries),
                         mismatches=tuple(mismatches))


def classify_monodromy(form: CharacterOneForm, tol: float = 1e-8) -> Monodromy:
    """Trivial iff every loop factor exp(2 pi i Res) is 1, i.e. all residues are integers."""
    for _, value in residues(form):
        if abs(value - round(value)) > tol:
            return Monodromy.REDUCIBLE_U1
    return Monodromy.TRIVIAL


# ---- path integration ----------------------------------------------------

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _segment_integral(fn, z0: complex, z1: complex, max_chunk: float = 0.1) -> complex:
    """Composite 32-node Gauss rule along the straight segment [z0, z1]."""
    length = abs(z1 - z0)
    chunks = max(1, int(math.ceil(length / max_chunk)))
    total = 0.0 + 0.0j
    for i in range(chunks):
        a = z0 + (z1 - z0) * (i / chunks)
        b = z0 + (z1 - z0) * ((i + 1) / chunks)
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        for node, weight in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
            total += weight * fn(mid + half * node) * half
    return total


def _segment_distance(point: complex, z0: complex, z1: complex) -> float:
    d = z1 - z0
    if d == 0:
        return abs(point - z0)
    t = ((point - z0) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(point - (z0 + t * d))


def _check_clearance(form, path):
    if not isinstance(form, CharacterOneForm):
        return
    poles = [root for root, _ in clustered_roots(form.coefficient.cancelled().den)]
    for z0, z1 in zip(path[:-1], path[1:]):
        for p in poles:
            if _segment_distance(p, z0, z1) < _CLEARANCE:
                raise PathThroughSingularity(
                    f"path segment [{z0}, {z1}] passes within {_CLEARANCE} of pole {p}")


def reconstruct_developing_map(form, basepoint: complex, endpoint: complex,
                               path=None) -> complex:
    """f(endpoint) = exp(int omega) along a polyline from the basepoint (f(basepoint) = 1).

    The value depends on the homotopy class of the path; different classes
    differ by the U(1) loop factors exp(2 pi i Res).
    """
    if path is None:
        path = [basepoint, endpoint]
    path = [complex(p) for p in path]
    _check_clearance(form, path)
    total = 0.0 + 0.0j
    for z0, z1 in zip(path[:-1], path[1:]):
        total += _segment_integral(form, z0, z1)
    return cmath.exp(total)


def normalized_reconstruction(form, spec, basepoint: complex, targets):
    """Reconstruct f on the targets with the integration constant pinned by the eigenfunction.

    exp(int omega) fixes f only up to a multiplicative constant; its modulus
    is determined by |f|^2 = (C - phi)/(C + phi) at the basepoint (the ratio
    is scale-invariant, so the canonical phi suffices), and the remaining
    U(1) phase drops out of every verified identity.
    """
    phi_b = canonical_eigenfunction(spec, basepoint)
    scale = math.sqrt((1.0 - phi_b) / (1.0 + phi_b))
    out = []
    for target in targets:
        path = radial_arc_path(basepoint, target)
        out.append(scale * reconstruct_developing_map(form, basepoint, target, path))
    return out


def radial_arc_path(basepoint: complex, target: complex, max_arc: float = 0.2):
    """Polyline from the basepoint along its circle to arg(target), then radially inward/outward."""
    basepoint, target = complex(basepoint), complex(target)
    r0, t0 = abs(basepoint), cmath.phase(basepoint)
    t1 = cmath.phase(target)
    sweep = t1 - t0
    if sweep > math.pi:
        sweep -= 2 * math.pi
    elif sweep < -math.pi:
        sweep += 2 * math.pi
    steps = max(1, int(math.ceil(abs(sweep) / max_arc)))
    path = [r0 * cmath.exp(1j * (t0 + sweep * i / steps)) for i in range(steps + 1)]
    path.append(target)
    return path


def loop_integral(form, center: complex, radius: float, num_points: int = 256) -> complex:
    """oint omega around a circle; equals 2 pi i times the sum of enclosed residues."""
    return 2j * math.pi * contour_residue(form, center, radius, num_points)


# ---- verification ----------------------------------------------------------

@dataclass(frozen=True)
class PullbackReport:
    max_density_rel_err: float
    max_modulus_abs_err: float


def verify_pullback(zs, fs, form: CharacterOneForm, spec,
                    extremal_constant: float = 1.0) -> PullbackReport:
    """Check f* (round metric) = g and |f|^2 = (C - phi)/(C + phi) on sample points.

    fs holds reconstructed map values at zs; f' is recovered from
    f' = f * (omega coefficient), valid since f = exp(int omega).
    """
    c = float(extremal_constant)
    density_err = 0.0
    modulus_err = 0.0
    for z, f in zip(zs, fs):
        z = complex(z)
        fprime = f * form.coefficient(z)
        pulled = 4.0 * abs(fprime) ** 2 / (1.0 + abs(f) ** 2) ** 2
        dens = density(spec, z)
        density_err = max(density_err, abs(pulled - dens) / dens)
        phi = c * canonical_eigenfunction(spec, z)
        modulus_err = max(modulus_err, abs(abs(f) ** 2 - (c - phi) / (c + phi)))
    return PullbackReport(density_err, modulus_err)


def verify_eigen_identity(phis, fs, extremal_constant: float) -> float:
    """max |phi - C (1 - |f|^2) / (1 + |f|^2)| over matched samples."""
    c = float(extremal_constant)
    worst = 0.0
    for phi, f in zip(phis, fs):
        t = abs(f) ** 2
        worst = max(worst, abs(phi - c * (1.0 - t) / (1.0 + t)))
    return worst


def extremal_constant(spec, phi_fn=None, n_radii: int = 60, n_angles: int = 24) -> float:
    """C = max |phi| over the sphere; cone limits pooled with a covering grid.

    Defaults to the canonical eigenfunction, for which the maximum 1 is
    attained at the poles of omega.
    """
    if phi_fn is None:
        def phi_fn(z):
            return canonical_eigenfunction(spec, z)
    best = max(abs(phi_fn(0j)), abs(phi_fn(INFINITY)))
    for r in np.geomspace(0.05, 20.0, n_radii):
        for t in np.linspace(0.0, 2.0 * math.pi, n_angles, endpoint=False):
            best = max(best, abs(phi_fn(r * cmath.exp(1j * t))))
    return float(best)
