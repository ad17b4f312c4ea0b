from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from detmoments.errors import PrecisionInsufficient
from detmoments.formulas import Scenario, det_moment, hybrid_qubit_n1, trial_bures_ratio
from detmoments.inversion import (
    EXACT_MAX_N,
    legendre_table,
    reconstruct,
    separability_probability,
    tail_probability,
    tail_weights,
    working_bits,
)
from detmoments.moments import (
    SUPPORTS,
    Mode,
    MomentSequence,
    Source,
    Variable,
    build_fixed_moments,
    build_moments,
)

HALF = F(1, 2)
UNIT = (F(0), F(1))


def _legendre_poly_moments(j, support, N):
    """Exact moments of x -> P_j(t(x)) on the support."""
    from detmoments.exact import Poly

    a, b = support
    c1, t0 = 2 / (b - a), -(a + b) / (b - a)
    t = Poly([t0, c1])
    pj = Poly([0])
    for i, c in enumerate(legendre_table(j)[j]):
        pj = pj + Poly([c]) * t**i
    out = []
    for m in range(N + 1):
        coeffs = (pj * Poly([0] * m + [1])).coeffs
        anti = lambda x: sum(c * x ** (i + 1) / (i + 1) for i, c in enumerate(coeffs))
        out.append(anti(b) - anti(a))
    return out


def test_uniform_reconstruction():
    """Moments 1/(j+1) on [0,1] give the constant density."""
    d = reconstruct(MomentSequence(UNIT, [F(1, j + 1) for j in range(5)]))
    assert d.legendre_coeffs[0] == HALF
    assert all(c == 0 for c in d.legendre_coeffs[1:])
    assert d.value(F(1, 3)) == 1


def test_linear_reconstruction():
    """Moments 1/(j+2) on [0,1] give f(x) = x."""
    d = reconstruct(MomentSequence(UNIT, [F(1, j + 2) for j in range(4)]))
    for x in (F(0), F(1, 7), F(1, 2), F(1)):
        assert d.value(x) == x


def test_beta22_projection():
    """A degree-2 truncation of Beta(2,2) matches its first three moments."""
    # Beta(2,2) density 6x(1-x): moments 6/((m+2)(m+3))
    mus = [F(6, (m + 2) * (m + 3)) for m in range(3)]
    d = reconstruct(MomentSequence(UNIT, mus))
    assert [d.moment(m) for m in range(3)] == mus
    # the projection of a quadratic is the quadratic itself
    assert d.value(HALF) == F(3, 2)


def test_tail_examples():
    """Tail masses of the uniform density on the PT-determinant support."""
    a, b = SUPPORTS[Variable.PT_DET]
    w = b - a
    mus = [(b ** (m + 1) - a ** (m + 1)) / ((m + 1) * w) for m in range(4)]
    d = reconstruct(MomentSequence((a, b), mus))
    assert tail_probability(d, 0) == F(1, 17)
    assert tail_probability(d, a) == mus[0]
    assert tail_probability(d, b) == 0


def test_tail_outside_support():
    """A threshold outside the support is rejected."""
    d = reconstruct(MomentSequence(UNIT, [F(1)]))
    with pytest.raises(ValueError):
        tail_probability(d, 2)


@given(st.integers(0, 24), st.integers(1, 10**6))
def test_moment_matching_exact(N, seed):
    """Exact reconstructions reproduce every input moment."""
    import random

    rnd = random.Random(seed)
    # moments of a random positive combination of point masses on [-1/16, 1/256]
    a, b = SUPPORTS[Variable.PT_DET]
    pts = [a + (b - a) * F(rnd.randint(0, 100), 100) for _ in range(3)]
    ws = [F(rnd.randint(1, 9)) for _ in range(3)]
    mus = [sum(w * p**m for w, p in zip(ws, pts)) for m in range(N + 1)]
    d = reconstruct(MomentSequence((a, b), mus))
    assert d.moments(N) == mus


def test_moment_matching_hybrid_n64():
    """The N = 64 hybrid reconstruction reproduces all 65 moments exactly."""
    ms = build_moments(Source.HYBRID_SUMMATION, 1, Mode.k_zero(), 64)
    d = reconstruct(ms)
    assert d.moments(64) == list(ms.moments)


@pytest.mark.parametrize("j", range(9))
def test_legendre_basis_sanity(j):
    """Moments of 1 + P_j(t(x)) reconstruct to lambda_0 = lambda_j = (b-a)/2 and nothing else."""
    support = SUPPORTS[Variable.PT_TIMES_DET]
    a, b = support
    N = 8
    mus = _legendre_poly_moments(0, support, N)
    if j:
        mus = [x + y for x, y in zip(mus, _legendre_poly_moments(j, support, N))]
    lam = reconstruct(MomentSequence(support, mus)).legendre_coeffs
    for i, c in enumerate(lam):
        assert c == ((b - a) / 2 if i in (0, j) else 0)


def test_tail_weights_match_reconstruction():
    """The weight form of the tail equals reconstruct + tail."""
    ms = build_moments(Source.TRIAL_EQ10, 1, Mode.balanced(), 20)
    W = tail_weights(ms.support, 0, 20)
    assert sum(w * m for w, m in zip(W, ms.moments)) == tail_probability(reconstruct(ms), 0)


def test_fixed_matches_exact():
    """Fixed-point moments and reconstruction agree with exact mode to the working precision."""
    ms = build_moments(Source.HYBRID_10F9, 1, Mode.k_zero(), 40)
    fm = build_fixed_moments(Source.HYBRID_10F9, 1, Mode.k_zero(), 40, 4096)
    ref = ms.to_fixed(4096)
    # the k = eps cancellation costs ~70 bits and each moment ~5 more
    assert all((x - y).bit_length() <= 80 + 5 * n for n, (x, y) in enumerate(zip(fm.nus, ref.nus)))
    te = tail_probability(reconstruct(ms), 0) / ms.moments[0]
    d = reconstruct(fm)
    tf = tail_probability(d, 0) / d.mass
    assert abs(te - tf) < F(1, 10**200)


def test_sep_prob_exact_vs_fixed():
    """Exact and doubled fixed-point estimates agree at N = 30."""
    e = separability_probability(Source.HYBRID_SUMMATION, 1, Mode.k_zero(), 30)
    f = separability_probability(Source.HYBRID_SUMMATION, 1, Mode.k_zero(), 30, precision_bits=4096)
    assert e.precision_bits == 0 and e.stable
    assert f.stable and f.precision_bits == 8192
    assert abs(e.exact - f.exact) < F(1, 10**12)


def test_precision_insufficient():
    """Far too few bits cannot be certified."""
    with pytest.raises(PrecisionInsufficient):
        separability_probability(Source.HYBRID_SUMMATION, 1, Mode.k_zero(), 200, precision_bits=16, max_doublings=1)


def test_working_bits_policy():
    """max(4096, 8N) bits and exact mode up to N = 512."""
    assert working_bits(100) == 4096
    assert working_bits(3000) == 24000
    assert EXACT_MAX_N == 512


def test_mu1_hybrid_k_zero():
    """mu_1 of the hybrid summation at k = eps is the degree-7 outcome at 0 up to O(eps)."""
    ms = build_moments(Source.HYBRID_SUMMATION, 1, Mode.k_zero(), 1)
    assert ms.moments[0] == 1
    assert abs(ms.moments[1] - hybrid_qubit_n1(0)) < F(1, 10**18)
    assert float(ms.moments[1]) == pytest.approx(-0.0020048, abs=5e-8)


def test_mu1_trial_balanced():
    """Balanced mu_1 is trialRatio(1,1,1) detMoment(Bures,1,1)."""
    ms = build_moments(Source.TRIAL_EQ10, 1, Mode.balanced(), 1)
    assert ms.moments[0] == 1
    assert ms.moments[1] == trial_bures_ratio(1, 1, 1) * det_moment(Scenario.bures(1), 1)
    assert ms.variable is Variable.PT_TIMES_DET


def test_mode_validation():
    """The k = 0 proxy must be positive."""
    with pytest.raises(ValueError):
        Mode.k_zero(0)


def test_estimate_json_fields():
    """Estimates serialise with the documented keys."""
    import json

    e = separability_probability(Source.HS_EQ6, 1, Mode.balanced(), 6)
    rec = json.loads(e.to_json())
    assert set(rec) == {"source", "alpha", "mode", "N", "precision_bits", "estimate", "stable"}
    assert rec["mode"] == "balanced" and rec["stable"] is True


def test_density_float_evaluation():
    """Clenshaw float evaluation agrees with exact values."""
    ms = build_moments(Source.HYBRID_SUMMATION, HALF, Mode.k_zero(), 12)
    d = reconstruct(ms)
    xs = [F(-1, 20), F(-1, 100), F(0), F(1, 300)]
    got = d.evaluate([float(x) for x in xs])
    for x, g in zip(xs, got):
        assert g == pytest.approx(float(d.value(x)), rel=1e-9, abs=1e-9)
