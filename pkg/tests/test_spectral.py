import math

import numpy as np
import pytest

from digitdrift.digits import pattern_count_l
from digitdrift.distribution import mu
from digitdrift.spectral import (
    A0,
    A0_inf,
    A1,
    asymptotic_norm_bound,
    char_function,
    char_function_series,
    check_gauss_bound,
    check_phi_lemma,
    check_reduction_lemma,
    column_norm,
    l2_norm_direct,
    l2_norm_quadrature,
    phi,
)

GRID = np.arange(1024) * (2 * np.pi / 1024)


def test_matrices_at_sample_angle():
    t = 0.7
    e = np.exp(1j * t)
    assert np.allclose(A0(t), [[1, 0.5 / e], [0, 0.5 * e]], atol=1e-15)
    assert np.allclose(A1(t), [[0.5 / e, 0], [0.5 * e, 1]], atol=1e-15)
    assert np.allclose(A0_inf(t), [[1, (1 / e) / (2 - e)], [0, 0]], atol=1e-15)


def test_A0_powers_converge_to_closing_matrix():
    t = 1.3
    p = np.linalg.matrix_power(A0(t), 80)
    assert np.allclose(p, A0_inf(t), atol=1e-15)


def test_column_norm_examples():
    assert column_norm(np.eye(2)) == 1.0
    assert np.allclose(column_norm(A0(GRID)), 1.0, atol=1e-15)
    assert np.allclose(column_norm(A0(GRID) @ A1(GRID) @ A0(GRID)), phi(GRID), atol=1e-12)


def test_submultiplicative():
    rng = np.random.default_rng(0)
    for _ in range(500):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        n = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert column_norm(m @ n) <= column_norm(m) * column_norm(n) + 1e-12


def test_phi_values():
    assert phi(0.0) == 1.0
    assert math.isclose(phi(math.pi), 0.5, abs_tol=1e-15)
    assert math.isclose(phi(math.pi / 2), (1 + math.sqrt(5)) / 4, abs_tol=1e-15)
    assert math.isclose(phi(math.pi / 2), 0.809017, abs_tol=1e-6)


def test_char_function_trivial():
    assert char_function(5, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(char_function(0, GRID), 1.0, atol=1e-15)


@pytest.mark.parametrize("a", range(0, 257))
def test_char_function_matches_series(a):
    fast = char_function(a, GRID)
    slow = char_function_series(mu(a), GRID)
    assert np.max(np.abs(fast - slow)) <= 1e-12
    assert np.all(np.abs(fast) <= 1 + 1e-12)


def test_l2_direct_examples():
    assert l2_norm_direct(mu(0))[0] == 1.0
    val, sq = l2_norm_direct(mu(1))
    assert sq == pytest.approx(1 / 3) and str(sq) == "1/3"
    assert val == pytest.approx(1 / math.sqrt(3), abs=1e-15)
    for a in (3, 5, 77):
        assert l2_norm_direct(mu(2 * a))[1] == l2_norm_direct(mu(a))[1]


def test_l2_quadrature_examples():
    assert abs(l2_norm_quadrature(1, 4096) - 1 / math.sqrt(3)) <= 1e-8
    assert abs(l2_norm_quadrature(0, 64) - 1.0) <= 1e-12
    assert abs(l2_norm_quadrature(341, 4096) - l2_norm_direct(mu(341))[0]) <= 1e-8
    with pytest.raises(ValueError):
        l2_norm_quadrature(3, 16)


def test_norm_bound_corpus():
    for a in range(1, 2049):
        l = pattern_count_l(a)
        if l >= 2:
            assert l2_norm_direct(mu(a))[0] <= asymptotic_norm_bound(l)


def test_phi_lemma_report():
    r = check_phi_lemma(512)
    assert r.ok and r.lemma == "phi"


def test_reduction_lemma_cases():
    r = check_reduction_lemma(2, 2)  # grid {0, pi}
    assert r.ok
    t = np.pi
    lhs = column_norm(A0(t) @ np.linalg.matrix_power(A1(t), 2) @ A0(t))
    assert lhs <= column_norm(A0(t) @ A1(t) @ A0(t))
    with pytest.raises(ValueError):
        check_reduction_lemma(1, 16)


def test_gauss_examples():
    assert phi(0.0) == math.exp(0.0)
    assert phi(math.pi) <= math.exp(-math.pi ** 2 / 15)
    assert math.exp(-math.pi ** 2 / 15) == pytest.approx(0.5179, abs=1e-4)
    r = check_gauss_bound(1001)
    assert r.ok and r.min_margin >= 0.0
    assert r.to_json()["lemma"] == "gauss"
