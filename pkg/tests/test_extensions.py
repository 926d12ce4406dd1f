"""Boundary-coefficient algebra: J counts, exponents, pairing, Lagrangian subspaces."""

from fractions import Fraction

import numpy as np
import pytest

from conespec.errors import LayoutMismatch
from conespec.extensions import (CoefficientVector, ExtensionType,
                                 admissible_leading_exponent,
                                 extension_subspace, is_lagrangian, layout_for,
                                 singular_count, symplectic_pairing)

FR = ExtensionType.FRIEDRICHS
HOL = ExtensionType.HOLOMORPHIC


def test_singular_count_rules():
    assert singular_count(2.5) == 2
    assert singular_count(3) == 2
    assert singular_count(0.5) == 0
    assert singular_count(Fraction(5, 2)) == 2
    assert singular_count(Fraction(7, 3)) == 2
    assert singular_count(1) == 0
    assert singular_count(3.0) == 2


def test_singular_count_monotone_on_each_branch():
    non_integers = [0.3, 0.9, 1.2, 1.9, 2.1, 2.8, 3.5, 4.7]
    counts = [singular_count(b) for b in non_integers]
    assert counts == sorted(counts)
    integers = [1, 2, 3, 4, 5]
    counts = [singular_count(b) for b in integers]
    assert counts == sorted(counts)


def test_admissible_leading_exponents():
    assert admissible_leading_exponent(HOL, 2.5, -2) == -2
    assert admissible_leading_exponent(FR, 2.5, -2) == 2
    assert admissible_leading_exponent(HOL, 2.5, 5) == 5
    assert admissible_leading_exponent(HOL, 2.5, 0) == 0
    assert admissible_leading_exponent(FR, 0.5, -3) == 3


def test_exponent_bounds():
    for beta in [Fraction(1, 2), Fraction(3, 4), Fraction(3, 2), Fraction(7, 3), 2, 3]:
        j = singular_count(beta)
        for k in range(-j - 3, j + 4):
            assert admissible_leading_exponent(FR, beta, k) >= 0
            sigma = admissible_leading_exponent(HOL, beta, k)
            assert sigma >= -j
            # L2 admissibility against the volume weight r^(2 beta - 1)
            assert sigma > -beta


def test_pairing_real_equal_blocks_vanishes():
    layout = layout_for(Fraction(5, 2))
    vec = CoefficientVector.zeros(layout)
    vec.a[:] = 1.0
    vec.b[:] = 1.0
    assert symplectic_pairing(vec, vec) == 0


def test_pairing_single_term():
    layout = layout_for(Fraction(5, 2))
    first = CoefficientVector.basis(layout, 0, "a", -2)
    second = CoefficientVector.basis(layout, 0, "b", -2)
    assert symplectic_pairing(first, second) == 1.0


def test_pairing_antisymmetry_randomized():
    layout = layout_for(Fraction(7, 3), n_cones=2)
    rng = np.random.default_rng(5)
    n = layout.side_dimension
    for _ in range(100):
        x = CoefficientVector(layout, rng.normal(size=n) + 1j * rng.normal(size=n),
                              rng.normal(size=n) + 1j * rng.normal(size=n))
        y = CoefficientVector(layout, rng.normal(size=n) + 1j * rng.normal(size=n),
                              rng.normal(size=n) + 1j * rng.normal(size=n))
        assert abs(symplectic_pairing(x, y) + np.conj(symplectic_pairing(y, x))) < 1e-12


def test_pairing_layout_mismatch():
    with pytest.raises(LayoutMismatch):
        symplectic_pairing(CoefficientVector.zeros(layout_for(Fraction(5, 2))),
                           CoefficientVector.zeros(layout_for(Fraction(1, 2))))


def test_small_beta_subspaces_coincide():
    layout = layout_for(Fraction(1, 2))
    fr = extension_subspace(FR, layout)
    hol = extension_subspace(HOL, layout)
    assert len(fr) == len(hol) == 1
    assert np.allclose(fr[0].flat(), hol[0].flat())
    # the single basis vector is a_0
    assert fr[0].a[0] == 1.0 and np.all(fr[0].b == 0)


def test_friedrichs_subspace_dimension():
    layout = layout_for(2.5)
    basis = extension_subspace(FR, layout)
    assert len(basis) == 5
    assert all(np.all(v.b == 0) for v in basis)


def test_holomorphic_subspace_index_structure():
    layout = layout_for(2.5)
    basis = extension_subspace(HOL, layout)
    assert len(basis) == 5
    a_modes = sorted(k for v in basis for k in range(-2, 3) if v.a[layout.index(0, k)] != 0)
    b_modes = sorted(k for v in basis for k in range(-2, 3) if v.b[layout.index(0, k)] != 0)
    assert a_modes == [0, 1, 2]
    assert b_modes == [-2, -1]


def test_both_extensions_lagrangian_on_grid():
    for beta in [Fraction(1, 2), Fraction(3, 4), Fraction(3, 2), Fraction(7, 3), 2, 3]:
        layout = layout_for(beta, n_cones=2)
        for ext in (FR, HOL):
            assert is_lagrangian(extension_subspace(ext, layout), layout)


def test_full_mode_pair_is_not_lagrangian():
    layout = layout_for(Fraction(1, 2))
    span = [CoefficientVector.basis(layout, 0, "a", 0),
            CoefficientVector.basis(layout, 0, "b", 0)]
    assert not is_lagrangian(span, layout)
