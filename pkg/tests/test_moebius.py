"""Moebius arithmetic: normalization, action, composition, unitarity."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from conespec.errors import NonExactNormalization, SingularTransform
from conespec.moebius import (INFINITY, ComplexFraction, MoebiusTransform,
                              apply, compose, identity, inverse, is_infinity,
                              is_unitary, normalize, rotation,
                              unitary_from_pair)


def close(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) <= tol


def test_normalize_scalar_multiple_of_identity():
    t = normalize(MoebiusTransform(2, 0, 0, 2))
    assert t.entries() == (ComplexFraction(1), ComplexFraction(0),
                           ComplexFraction(0), ComplexFraction(1))


def test_normalize_antidiagonal_exact():
    t = normalize(MoebiusTransform(0, 2, -2, 0))
    assert t.b == ComplexFraction(1) and t.c == ComplexFraction(-1)
    assert t.a == ComplexFraction(0) and t.d == ComplexFraction(0)


def test_normalize_principal_square_root_float():
    # det = 2, so every entry divides by sqrt(2)
    t = normalize(MoebiusTransform(1.0, 1.0, 0.0, 2.0))
    s = math.sqrt(2.0)
    assert close(t.a, 1 / s) and close(t.b, 1 / s)
    assert close(t.c, 0) and close(t.d, s)


def test_normalize_exact_rejects_non_square_determinant():
    with pytest.raises(NonExactNormalization):
        normalize(MoebiusTransform(1, 1, 0, 2))


def test_normalize_exact_gaussian_square():
    # det = 2i = (1 + i)^2
    t = MoebiusTransform(ComplexFraction(0, 2), 0, 0, 1)
    n = normalize(t)
    det = n.determinant()
    assert det == ComplexFraction(1)


def test_normalize_singular_raises():
    with pytest.raises(SingularTransform):
        normalize(MoebiusTransform(1, 2, 2, 4))
    with pytest.raises(SingularTransform):
        normalize(MoebiusTransform(1.0, 2.0, 2.0, 4.0))


def test_normalize_is_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a, b, c, d = (complex(*pair) for pair in rng.normal(size=(4, 2)))
        t = normalize(MoebiusTransform(a, b, c, d))
        again = normalize(t)
        assert all(close(x, y) for x, y in zip(t.entries(), again.entries()))


def test_apply_identity_and_inversion():
    assert close(apply(identity(), 3 + 4j), 3 + 4j)
    assert close(apply(MoebiusTransform(0, 1, -1, 0), 2.0), -0.5)


def test_apply_at_infinity():
    assert is_infinity(apply(MoebiusTransform(1, 1, 0, 1), INFINITY))
    assert close(apply(MoebiusTransform(2.0, 1.0, 1.0, 1.0), INFINITY), 2.0)
    assert is_infinity(apply(MoebiusTransform(1.0, 0.0, 1.0, 1.0), -1.0))


def test_apply_exact_scalars():
    t = MoebiusTransform(1, ComplexFraction(0, 1), 0, 1)  # z + i
    w = apply(t, ComplexFraction(Fraction(1, 2), 0))
    assert w == ComplexFraction(Fraction(1, 2), 1)


def test_compose_inverse_gives_identity():
    t = normalize(MoebiusTransform(1.0 + 2.0j, 0.5, -0.25j, 1.0))
    e = compose(t, inverse(t))
    assert close(e.a, 1) or close(e.a, -1)  # sign ambiguity of the lift
    assert close(e.b, 0) and close(e.c, 0)


def test_compose_with_identity():
    t = normalize(MoebiusTransform(2.0, 1.0, 1.0, 1.0))
    s = compose(identity(), t)
    assert all(close(x, y) for x, y in zip(s.entries(), t.entries()))


def test_rotations_compose_additively():
    alpha, gamma = 0.7, 1.9
    t = compose(rotation(alpha), rotation(gamma))
    w = 0.3 + 0.8j
    assert close(apply(t, w), cmath.exp(1j * (alpha + gamma)) * w)


def test_is_unitary_examples():
    assert is_unitary(identity())
    assert is_unitary(rotation(1.1))
    assert not is_unitary(MoebiusTransform(1.0, 1.0, 0.0, 1.0))


def test_apply_respects_composition_randomized():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        entries = [complex(*pair) for pair in rng.normal(size=(8, 2))]
        s = normalize(MoebiusTransform(*entries[:4]))
        t = normalize(MoebiusTransform(*entries[4:]))
        w = complex(*rng.normal(size=2))
        lhs = apply(compose(s, t), w)
        rhs = apply(s, apply(t, w))
        if is_infinity(lhs) or is_infinity(rhs):
            continue
        worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-12


def test_apply_respects_composition_exact():
    s = normalize(MoebiusTransform(1, 1, 0, 1))
    t = normalize(MoebiusTransform(1, 0, ComplexFraction(0, 1), 1))
    w = ComplexFraction(Fraction(1, 3), Fraction(2, 5))
    assert apply(compose(s, t), w) == apply(s, apply(t, w))


def test_unitary_conjugation_stability():
    rng = np.random.default_rng(3)
    for _ in range(40):
        u = unitary_from_pair(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        t = unitary_from_pair(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        conj = compose(compose(u, t), inverse(u))
        assert is_unitary(conj, tol=1e-10)


def test_complex_fraction_sqrt_roundtrip():
    values = [ComplexFraction(Fraction(9, 4)), ComplexFraction(-4),
              ComplexFraction(0, 2), ComplexFraction(Fraction(3, 2), 2),
              ComplexFraction(5, 12)]
    for v in values:
        try:
            r = v.sqrt()
        except NonExactNormalization:
            continue
        assert r * r == v
        # principal branch
        assert r.re > 0 or (r.re == 0 and r.im >= 0)
