from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from detmoments.errors import NotTerminating, PoleBeforeTermination
from detmoments.exact import ALPHA, K, N, AffineForm
from detmoments.formulas import hs_series, hs_ratio, hybrid_qubit_n1, trial_series
from detmoments.hyper import (
    HyperSeries,
    alpha_count,
    balance_gap,
    evaluate_direct,
    evaluate_limit,
    evaluate_terminating,
    termination_index,
)
from detmoments.utility import QUBIT_QUTRIT, TWO_QUBIT_BURES, hybrid_10f9

from strategies import affine_forms


def _two_f_one():
    return HyperSeries((AffineForm(-1), AffineForm(1)), (AffineForm(2),), 1)


def test_2f1_trivial():
    """2F1(-1, 1; 2; 1) = 1 - 1/2."""
    assert evaluate_terminating(_two_f_one(), {}) == F(1, 2)


def test_hs_series_matches_classical_point():
    """hsRatio(0, 1, 1) is 1/495."""
    assert hs_ratio(0, 1, 1) == F(1, 495)
    assert hs_ratio(0, 1, 1, semantics="strict") == F(1, 495)


def test_hybrid_10f9_at_n1_matches_degree7_outcome():
    """prefactor times the hybrid 10F9 at alpha = 1, n = 1, k = 1 gives the degree-7 outcome."""
    pref, series = hybrid_10f9(TWO_QUBIT_BURES, 1)
    v = evaluate_terminating(series, {"alpha": 1, "n": 1, "k": 1})
    assert pref(1, 1) * v == hybrid_qubit_n1(1)
    assert v == evaluate_direct(series, {"alpha": 1, "n": 1, "k": 1})


def test_balance_gaps():
    """Saalschutz gaps of the printed series."""
    assert balance_gap(hybrid_10f9(TWO_QUBIT_BURES, 1)[1]) == AffineForm(1)
    assert balance_gap(hybrid_10f9(QUBIT_QUTRIT, 1)[1]) == 2 + 9 * ALPHA
    assert balance_gap(hs_series()) == AffineForm(1)


def test_alpha_counts():
    """Numbers of alpha-bearing parameters in each list."""
    assert alpha_count(hybrid_10f9(TWO_QUBIT_BURES, 1)[1]) == (7, 6)
    assert alpha_count(hybrid_10f9(QUBIT_QUTRIT, 1)[1]) == (8, 7)
    assert alpha_count(hs_series()) == (3, 2)


def test_qq_argument():
    """The qubit-qutrit series carries the argument 3^6/4."""
    assert hybrid_10f9(QUBIT_QUTRIT, 1)[1].argument == F(729, 4)


def test_not_terminating():
    """No nonpositive-integer numerator parameter raises NotTerminating."""
    s = HyperSeries((AffineForm(F(1, 2)), AffineForm(1)), (AffineForm(2),), 1)
    with pytest.raises(NotTerminating):
        evaluate_terminating(s, {})


def test_pole_before_termination():
    """A denominator -1 with T = 3 raises PoleBeforeTermination."""
    s = HyperSeries((AffineForm(-3),), (AffineForm(-1),), 1)
    with pytest.raises(PoleBeforeTermination):
        evaluate_terminating(s, {})
    with pytest.raises(PoleBeforeTermination):
        evaluate_direct(s, {})


def test_denominator_zero_at_termination_is_fine():
    """A denominator -m with m = T is never reached."""
    s = HyperSeries((AffineForm(-2), AffineForm(1)), (AffineForm(-2),), 1)
    assert evaluate_terminating(s, {}) == evaluate_direct(s, {})


def test_termination_uses_smallest_index():
    """Deeper numerator zeros do not extend the sum."""
    assert termination_index([F(-5), F(-2), F(1, 2)]) == 2


def test_limit_resolves_collision():
    """The limit k -> 0 of the trial series is finite where strict evaluation hits 0/0."""
    s = trial_series()
    b = {"alpha": 1, "n": 1, "k": 0}
    # the limit agrees with a tiny positive k up to O(k)
    v0 = evaluate_limit(s, b)
    ve = evaluate_terminating(s, {"alpha": 1, "n": 1, "k": F(1, 10**40)})
    assert abs(v0 - ve) < F(1, 10**30)


def test_limit_equals_strict_without_collision():
    """Both semantics agree on the HS series when k >= n."""
    s = hs_series()
    for n in range(4):
        for k in range(n, 5):
            b = {"alpha": F(1, 2), "n": n, "k": k}
            assert evaluate_limit(s, b) == evaluate_terminating(s, b)


def test_limit_tracks_epsilon_proxy():
    """Where strict and limit differ, the limit is the k -> k + eps value."""
    s = hs_series()
    eps = F(1, 10**40)
    for n in range(4):
        for k in range(4):
            v = evaluate_limit(s, {"alpha": F(1, 2), "n": n, "k": k})
            w = evaluate_terminating(s, {"alpha": F(1, 2), "n": n, "k": k + eps})
            assert abs(v - w) < F(1, 10**35)


def test_text_round_trip_example():
    """The hybrid series survives the text form."""
    s = hybrid_10f9(TWO_QUBIT_BURES, 1)[1]
    assert HyperSeries.from_text(s.to_text()) == s
    assert "a" in s.to_text()


small_series = st.tuples(
    st.integers(0, 6),
    st.lists(st.fractions(min_value=F(1, 5), max_value=6, max_denominator=6), min_size=0, max_size=3),
    st.lists(st.fractions(min_value=F(1, 6), max_value=6, max_denominator=6), min_size=1, max_size=3),
    st.fractions(min_value=-3, max_value=3, max_denominator=5),
)


def _build(T, nums, dens, z):
    return HyperSeries((AffineForm(-T),) + tuple(AffineForm(x) for x in nums), tuple(AffineForm(x) for x in dens), z)


@given(small_series, st.randoms(use_true_random=False))
def test_permutation_invariance(data, rnd):
    """Shuffling either list leaves the value unchanged."""
    s = _build(*data)
    num, den = list(s.num), list(s.den)
    rnd.shuffle(num)
    rnd.shuffle(den)
    t = HyperSeries(num, den, s.argument)
    assert t == s
    assert evaluate_terminating(t, {}) == evaluate_terminating(s, {})


@given(small_series, st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9))
def test_parameter_cancellation(data, c):
    """Adding the same parameter to both lists is a no-op."""
    s = _build(*data)
    t = s.with_params(s.num + (AffineForm(c),), s.den + (AffineForm(c),))
    assert evaluate_terminating(t, {}) == evaluate_terminating(s, {})


@given(small_series)
def test_zero_argument(data):
    """z = 0 gives 1."""
    T, nums, dens, _ = data
    assert evaluate_terminating(_build(T, nums, dens, 0), {}) == 1


@given(small_series)
def test_recursion_matches_direct(data):
    """Nested recursion equals term-by-term Pochhammer evaluation."""
    s = _build(*data)
    assert evaluate_terminating(s, {}) == evaluate_direct(s, {})


@given(st.integers(0, 5), st.integers(0, 5), st.sampled_from([F(1, 2), F(1), F(2)]))
def test_affine_bound_series_matches_direct(n, k, a):
    """Bound HS 5F4 values agree between the two evaluators."""
    s = hs_series()
    b = {"alpha": a, "n": n, "k": k}
    assert evaluate_terminating(s, b) == evaluate_direct(s, b)


@given(st.lists(affine_forms(), min_size=1, max_size=4), st.lists(affine_forms(), max_size=4),
       st.fractions(min_value=-5, max_value=5, max_denominator=9))
def test_text_round_trip(num, den, z):
    """to_text / from_text is the identity."""
    s = HyperSeries(tuple(num), tuple(den), z)
    assert HyperSeries.from_text(s.to_text()) == s


def test_unknown_binding_rejected():
    """Bindings other than alpha, k, n are refused."""
    with pytest.raises(KeyError):
        evaluate_terminating(_two_f_one(), {"x": 1})
