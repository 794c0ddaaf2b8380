from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from digitdrift.digits import pattern_count_l, to_word, word_value
from digitdrift.distribution import moment, mu
from digitdrift.exactnum import ONE, ZERO, DyadicRational
from digitdrift.variance import (
    BETA0,
    BETA1,
    BETA_INF,
    FAMILIES,
    I0,
    I1,
    I_INF,
    LINEAR_PART,
    V,
    block_weight,
    bound_thresholds,
    per_position_bounds,
    ratio_scan,
    row_sum,
    scan_csv,
    trajectory,
    variance,
    variance_bounds_check,
)

H = DyadicRational(1, 1)


def test_taylor_matrix_identities():
    for m in (I0, I1, I_INF):
        assert row_sum(m) == (ONE, ONE)
    for m in LINEAR_PART.values():
        assert row_sum(m) == (ZERO, ZERO)
    assert row_sum(BETA0) == (ZERO, -H)
    assert row_sum(BETA1) == (-H, ZERO)
    assert row_sum(BETA_INF) == (ZERO, -ONE)


def test_V_examples():
    assert V(1) == -1
    assert variance(1) == 2
    for k in range(30):
        assert V(2 ** k) == -1
    with pytest.raises(ValueError):
        V(0)
    assert variance(0) == 0


@pytest.mark.parametrize("a", range(1, 513))
def test_variance_equals_second_moment(a):
    assert variance(a) == moment(mu(a), 2)


@given(st.integers(1, 2 ** 64))
def test_trajectory_invariant(a):
    for v in trajectory(to_word(a)):
        assert v[0] + v[1] == ONE
        assert ZERO <= v[0] <= ONE and ZERO <= v[1] <= ONE


def test_per_position_examples():
    pb = per_position_bounds(1)
    p = pb.positions[0]
    assert (p.lower, p.value, p.upper) == (ZERO, H, H)
    pb = per_position_bounds(25)
    assert len(pb.positions) == 5 and pb.ok
    assert all(p.lower == 0 for p in per_position_bounds(0b111000).positions[:3])


def test_closing_term_counterexample():
    # top block of length 2: v_{N+1} = (1/4, 3/4), above 2^-(b1_N - 1) = 1/2
    pb = per_position_bounds(3)
    assert pb.closing_value == DyadicRational(3, 2)
    assert pb.closing_value > pb.closing_upper
    assert pb.closing_value <= ONE


@pytest.mark.parametrize("a", range(1, 4097, 7))
def test_lemma_sandwiches(a):
    assert per_position_bounds(a).ok
    l = pattern_count_l(a)
    assert l <= block_weight(a) <= 2 * l + 1


def test_bounds_report_examples():
    r = variance_bounds_check(1)
    assert (r.l, r.neg2V, r.lower, r.proof_upper) == (0, 2, -1, 4)
    assert r.lower_ok and r.proof_upper_ok
    r = variance_bounds_check(5)
    assert r.l == 1 and r.neg2V == DyadicRational(7, 1)
    assert (r.stated_upper, r.proof_upper) == (6, 8)
    assert r.lower_ok and r.stated_upper_ok and r.proof_upper_ok


@settings(max_examples=60)
@given(st.lists(st.integers(1, 5), min_size=17, max_size=40))
def test_bounds_for_many_patterns(runs):
    word = []
    for i, n in enumerate(runs):
        word.extend([i % 2 ^ 1] * n)  # start with ones, alternate
    a = word_value(word)
    r = variance_bounds_check(a)
    assert r.l >= 8
    assert r.lower_ok and r.proof_upper_ok and r.stated_upper_ok


def test_bound_thresholds():
    reports = [variance_bounds_check(a) for a in range(1, 257)]
    th = bound_thresholds(reports)
    assert th["lower"] == 0 and th["proof_upper"] == 0
    assert th["stated_upper"] == 2


def test_scan_first_rows():
    rows = ratio_scan("A", 1)
    assert rows[0].a == 1 and rows[0].l == 0 and rows[0].ratio is None
    assert rows[1].a == 5 and rows[1].l == 1 and rows[1].ratio == variance(5).to_fraction()


def test_family_values():
    for n in range(6):
        assert ratio_scan("A", n, n_min=n)[0].a == sum(2 ** (2 * k) for k in range(n + 1))
        assert ratio_scan("B", n, n_min=n)[0].a == sum(2 ** (4 * k) + 2 ** (4 * k + 1) for k in range(n + 1))
        assert ratio_scan("C", n, n_min=n)[0].a == sum(2 ** (6 * k) * 7 for k in range(n + 1))
    assert ratio_scan("D", 3, n_min=3)[0].word == (1, 0, 1, 1, 0, 0, 1, 1, 1)


def test_scan_custom_family_and_budget():
    rows = ratio_scan(lambda n: 2 ** n + 1, 4, n_min=1)
    assert [r.a for r in rows] == [3, 5, 9, 17]
    with pytest.raises(ValueError):
        ratio_scan("D", 40, bit_budget=100)
    with pytest.raises(ValueError):
        ratio_scan("Z", 3)


def test_scan_ratio_window():
    for fam in FAMILIES:
        for r in ratio_scan(fam, 32):
            if r.l >= 4:
                assert 1 <= r.ratio <= 4


def test_scan_csv():
    text = scan_csv(ratio_scan("A", 2))
    assert text.splitlines() == [
        "n,bitlen,l,neg2V_num,neg2V_exp,ratio_decimal",
        "0,1,0,2,0,",
        "1,3,1,7,1,3.500000000000",
        "2,5,2,39,3,2.437500000000",
    ]


def test_closing_flags():
    pb = per_position_bounds(3)
    assert pb.ok and not pb.closing_ok and pb.closing_le_one
    assert all(per_position_bounds(a).closing_le_one for a in range(1, 600))
