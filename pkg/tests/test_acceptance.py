"""Acceptance criteria, one pass/fail line each.

Every check runs at the stated tolerance.  Results are collected in
``RESULTS`` and printed as a block at the end of the pytest session (see
``conftest.py``); running this file directly prints the same block.
Criterion 5 is long-running (hours) and carries the ``slow`` marker.
"""

from __future__ import annotations

import time
from fractions import Fraction as F

import pytest

from detmoments.formulas import (
    CATALOG,
    Measure,
    Scenario,
    bures_ratio_n1,
    bures_rebit_n2_ratio,
    classical_ratio,
    det_moment,
    f2_bures_n1,
    hs_ratio,
    n2_rebit_ratio_rf,
    prefactor,
    qq_ratio_n1,
    qq_simplified_n1,
    trial_bures_ratio,
)
from detmoments.hyper import alpha_count, balance_gap, evaluate_terminating
from detmoments.exact import AffineForm
from detmoments.inversion import reconstruct, separability_probability
from detmoments.moments import SUPPORTS, Mode, MomentSequence, Source, Variable, build_moments
from detmoments.oracle import assemble_n2, expect_first_three, expect_monomial, expect_pt_squared, normalization
from detmoments.seqfit import auto_fit
from detmoments.utility import TWO_QUBIT_BURES, f2_bures, hybrid_10f9, hybrid_moment, ptt_summation, r_from_det_moment

HALF = F(1, 2)
RESULTS: dict[int, list[tuple[str, bool, str]]] = {}
TITLES = {
    1: "exact-identity suite",
    2: "hybrid 10F9 reconstruction",
    3: "8F12 candidate",
    4: "n=2 two-rebit",
    5: "separability-probability reproduction",
    6: "inversion property suite",
    7: "oracle suite",
    8: "seqfit round-trip",
}


def record(crit: int, label: str, ok: bool, detail: str = "") -> bool:
    RESULTS.setdefault(crit, []).append((label, bool(ok), detail))
    return bool(ok)


def summary_lines() -> list[str]:
    out = []
    for crit in sorted(RESULTS):
        checks = RESULTS[crit]
        bad = [c for c in checks if not c[1]]
        status = "PASS" if not bad else "FAIL"
        line = f"criterion {crit} ({TITLES[crit]}): {status} [{len(checks) - len(bad)}/{len(checks)} checks]"
        if bad:
            label, _, detail = bad[0]
            line += f" first failure: {label} {detail}".rstrip()
        out.append(line)
        for label, ok, detail in checks:
            if crit == 5 or not ok:
                out.append(f"    {'ok  ' if ok else 'FAIL'} {label} {detail}".rstrip())
    return out


def _all_equal(crit, label, pairs) -> bool:
    bad = [(i, a, b) for i, (a, b) in enumerate(pairs) if a != b]
    detail = "" if not bad else f"(first mismatch at index {bad[0][0]}: {bad[0][1]} != {bad[0][2]})"
    return record(crit, label, not bad, detail)


# ---------------------------------------------------------------------------
# 1
# ---------------------------------------------------------------------------


def test_criterion_1_exact_identities():
    """Corrigenda, anchors, classical reductions, qubit-qutrit and n=1 utility identities hold exactly in under a minute."""
    t = time.perf_counter()
    ok = True
    sh = Scenario.bures(HALF)
    ok &= _all_equal(1, "(a) eq1 shifted = eq3", [(CATALOG["eq1_printed"](k + 1), CATALOG["eq3"](k)) for k in range(51)])
    ok &= _all_equal(1, "(a) eq2 shifted x moment ratio = eq5", [
        (CATALOG["eq2_printed"](k + 1) * det_moment(sh, k + 1) / det_moment(sh, k), CATALOG["eq5"](k)) for k in range(51)
    ])
    ok &= record(1, "(b) buresRatioN1(1,0) = -1/256", bures_ratio_n1(1, 0) == F(-1, 256))
    ok &= record(1, "(b) buresRatioN1(1/2,0) = -2663/860160", bures_ratio_n1(HALF, 0) == F(-2663, 860160))
    ok &= _all_equal(1, "(c) hsRatio(0,1,k) = eq8", [(hs_ratio(0, 1, k), classical_ratio(Measure.HS, k)) for k in range(31)])
    ok &= _all_equal(1, "(c) trialRatio(0,1,k) = eq9", [
        (trial_bures_ratio(0, 1, k), classical_ratio(Measure.BURES, k)) for k in range(31)
    ])
    for a in (HALF, F(1)):
        s = Scenario.qubit_qutrit(a)
        ok &= _all_equal(1, f"(d) qqRatioN1 = prefactor x simplified, alpha={a}", [
            (qq_ratio_n1(a, k), prefactor(s, 1, k) * qq_simplified_n1(a, k)) for k in range(31)
        ])
        r = r_from_det_moment(Scenario.bures(a))
        ok &= _all_equal(1, f"(e) F1 = R + F2 at n=1, alpha={a}", [
            (bures_ratio_n1(a, k), r(1, k) + f2_bures_n1(a, k)) for k in range(51)
        ])
    dt = time.perf_counter() - t
    ok &= record(1, "runtime < 60 s", dt < 60, f"({dt:.2f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 2
# ---------------------------------------------------------------------------


def test_criterion_2_hybrid_10f9():
    """prefactor x printed 10F9 equals the hybrid summation on the full grid, with gap 1 and alpha counts (7,6)."""
    t = time.perf_counter()
    ok = True
    bad = []
    total = 0
    for a in (HALF, F(1), F(3, 2), F(2)):
        pref, series = hybrid_10f9(TWO_QUBIT_BURES, a)
        for n in range(6):
            for k in range(1, 7):
                total += 1
                lhs = pref(n, k) * evaluate_terminating(series, {"alpha": a, "n": n, "k": k})
                if lhs != hybrid_moment(a, n, k):
                    bad.append((a, n, k))
    detail = f"({total - len(bad)}/{total} grid points equal"
    if bad:
        a, n, k = bad[0]
        detail += f"; first mismatch alpha={a} n={n} k={k}; all mismatches have n>=2: {all(b[1] >= 2 for b in bad)}"
    ok &= record(2, "grid equality", not bad, detail + ")")
    s = hybrid_10f9(TWO_QUBIT_BURES, 1)[1]
    ok &= record(2, "balanceGap = 1", balance_gap(s) == AffineForm(1))
    ok &= record(2, "alphaCount = (7,6)", alpha_count(s) == (7, 6))
    dt = time.perf_counter() - t
    ok &= record(2, "runtime < 60 s", dt < 60, f"({dt:.2f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 3
# ---------------------------------------------------------------------------


def test_criterion_3_8f12_candidate():
    """The 8F12 candidate F2 reproduces both n=1 closed forms for k = 0..30."""
    from detmoments.formulas import candidate_f2_8f12
    from detmoments.utility import F2Model

    t = time.perf_counter()
    ok = True
    for a, key in ((F(1), "eq3"), (HALF, "eq5")):
        f2 = F2Model(lambda n, k, a=a: candidate_f2_8f12(a, n, k))
        r = r_from_det_moment(Scenario.bures(a))
        ok &= _all_equal(3, f"summation = {key}", [(ptt_summation(f2, r, 1, k), CATALOG[key](k)) for k in range(31)])
    dt = time.perf_counter() - t
    ok &= record(3, "runtime < 60 s", dt < 60, f"({dt:.2f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 4
# ---------------------------------------------------------------------------


def test_criterion_4_n2_rebit():
    """Corrected n=2 rebit ratio hits both exact moments; the printed constant is off by exactly 2^10."""
    t = time.perf_counter()
    ok = True
    sh = Scenario.bures(HALF)
    ok &= record(4, "ratio(0) = 50654227/1307993702400", bures_rebit_n2_ratio(0) == F(50654227, 1307993702400))
    ok &= record(4, "ratio(1) x <|rho|> = 11395427/9630347469783040",
                 bures_rebit_n2_ratio(1) * det_moment(sh, 1) == F(11395427, 9630347469783040))
    lit = n2_rebit_ratio_rf(paper_literal=True)
    ok &= record(4, "printed 2^12 variant off by 2^10 at k=0,1",
                 all(lit(k) == 1024 * bures_rebit_n2_ratio(k) for k in (0, 1)))
    start = F(215072950441, 5273830608076800)
    ok &= record(4, "assembleN2(0, start) = biggy2", assemble_n2(0, start) == F(50654227, 1307993702400))
    dt = time.perf_counter() - t
    ok &= record(4, "runtime < 1 s", dt < 1, f"({dt:.3f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 5
# ---------------------------------------------------------------------------

# (label, source, mode, alpha, N, target, tolerance)
C5_RUNS = []
for N, targets in ((3000, ("0.23645208", "0.079901505", "0.012458305")), (6000, ("0.23631557", "0.079821829", "0.01245737"))):
    for a, v in zip((HALF, F(1), F(2)), targets):
        C5_RUNS.append(("hybrid k-zero", Source.HYBRID_10F9, "k-zero", a, N, v, "5e-7"))
for N, targets in ((3000, ("0.39593", "0.25861")), (6000, ("0.38718", "0.23634"))):
    for a, v in zip((HALF, F(1)), targets):
        C5_RUNS.append(("trial balanced", Source.TRIAL_EQ10, "balanced", a, N, v, "1e-4"))
for N, targets in ((3000, ("0.334796318", "0.2049266304", "0.1482428189")),
                   (6000, ("0.3172391218", "0.1765322036", "0.112681718"))):
    for a, v in zip((HALF, F(1), F(2)), targets):
        C5_RUNS.append(("hybrid balanced", Source.HYBRID_10F9, "balanced", a, N, v, "1e-6"))

C5_ESTIMATES: dict[tuple[str, F, int], F] = {}


@pytest.mark.slow
@pytest.mark.parametrize("label,source,mode,alpha,N,target,tol", C5_RUNS,
                         ids=[f"{r[0].replace(' ', '-')}-a{r[3]}-N{r[4]}" for r in C5_RUNS])
def test_criterion_5_separability(label, source, mode, alpha, N, target, tol):
    """Published separability estimates are reproduced within the stated tolerance."""
    m = Mode.k_zero() if mode == "k-zero" else Mode.balanced()
    est = separability_probability(source, alpha, m, N)
    C5_ESTIMATES[(label, alpha, N)] = est.exact
    err = abs(est.exact - F(target))
    ok = est.stable and err <= F(tol)
    record(5, f"{label} alpha={alpha} N={N}", ok,
           f"estimate={est.value[:14]} target={target} |err|={float(err):.2e} tol={tol} "
           f"bits={est.precision_bits} stable={est.stable} ({est.seconds:.0f} s)")
    assert ok


@pytest.mark.slow
def test_criterion_5_trend():
    """Hybrid k-zero estimates at N=6000 lie strictly below those at N=3000."""
    ok = True
    for a in (HALF, F(1), F(2)):
        lo = C5_ESTIMATES.get(("hybrid k-zero", a, 3000))
        hi = C5_ESTIMATES.get(("hybrid k-zero", a, 6000))
        if lo is None or hi is None:
            pytest.skip("needs the N=3000 and N=6000 runs from this session")
        ok &= record(5, f"trend alpha={a}: N=6000 < N=3000", hi < lo)
    reference = "1680(sqrt2-1)/pi^8 ~ 0.0733389"
    record(5, f"(comparison constant only, not reproduced: {reference})", True)
    assert ok


# ---------------------------------------------------------------------------
# 6
# ---------------------------------------------------------------------------


def _legendre_density_moments(j, support, N):
    from detmoments.exact import Poly
    from detmoments.inversion import legendre_table

    a, b = support
    c1, t0 = 2 / (b - a), -(a + b) / (b - a)
    t = Poly([t0, c1])
    pj = Poly([0])
    for i, c in enumerate(legendre_table(j)[j]):
        pj = pj + Poly([c]) * t**i
    out = []
    for m in range(N + 1):
        cs = (pj * Poly([0] * m + [1])).coeffs
        out.append(sum(c * (b ** (i + 1) - a ** (i + 1)) / (i + 1) for i, c in enumerate(cs)))
    return out


def test_criterion_6_inversion():
    """Exact moment matching up to N=64, the Legendre delta test and float-mode stability, in under a minute."""
    t = time.perf_counter()
    ok = True
    unit = (F(0), F(1))
    for name, mus in (("uniform", [F(1, j + 1) for j in range(65)]), ("linear", [F(2, j + 2) for j in range(65)])):
        d = reconstruct(MomentSequence(unit, mus))
        ok &= record(6, f"moment matching {name} N=64", d.moments(64) == mus)
    for src, mode in ((Source.HYBRID_SUMMATION, Mode.k_zero()), (Source.TRIAL_EQ10, Mode.balanced())):
        ms = build_moments(src, 1, mode, 64)
        ok &= record(6, f"moment matching {src.value} {mode.kind.value} N=64",
                     reconstruct(ms).moments(64) == list(ms.moments))
    support = SUPPORTS[Variable.PT_DET]
    a, b = support
    base = _legendre_density_moments(0, support, 8)
    delta_ok = True
    for j in range(9):
        mus = base if j == 0 else [x + y for x, y in zip(base, _legendre_density_moments(j, support, 8))]
        lam = reconstruct(MomentSequence(support, mus)).legendre_coeffs
        delta_ok &= all(c == ((b - a) / 2 if i in (0, j) else 0) for i, c in enumerate(lam))
    ok &= record(6, "Legendre delta test j<=8", delta_ok)
    exact = separability_probability(Source.HYBRID_10F9, 1, Mode.k_zero(), 48)
    fl = separability_probability(Source.HYBRID_10F9, 1, Mode.k_zero(), 48, precision_bits=4096)
    ok &= record(6, "float mode stable under doubling and equal to exact (N=48)",
                 fl.stable and abs(fl.exact - exact.exact) < F(1, 10**12),
                 f"(exact={exact.value[:14]} float={fl.value[:14]} bits={fl.precision_bits})")
    dt = time.perf_counter() - t
    ok &= record(6, "runtime < 60 s", dt < 60, f"({dt:.1f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 7
# ---------------------------------------------------------------------------


def _rel(x, y):
    return abs(x - y) / abs(y)


def test_criterion_7_oracle():
    """Quadrature reproduces the normalisation, the three monomials, the start value and the numeric list."""
    t = time.perf_counter()
    ok = True
    norm = normalization().value
    ok &= record(7, "normalization = 1 +- 1e-6", abs(norm - 1) <= 1e-6, f"({norm:.10f})")
    for exps, want in (((0, 0, 0, 8), F(29607386147749, 1318457652019200)),
                       ((0, 0, 1, 7), F(10306738882511, 5273830608076800)),
                       ((0, 0, 2, 6), F(102540856051, 210953224323072))):
        v = expect_monomial(exps).value
        ok &= record(7, f"<l^{exps}> rel 1e-5", _rel(v, float(want)) <= 1e-5, f"(rel {_rel(v, float(want)):.1e})")
    v = expect_first_three(0).value
    ok &= record(7, "start integral 0.000040781133 rel 1e-5", _rel(v, 0.000040781133) <= 1e-5, f"(rel {_rel(v, 0.000040781133):.1e})")
    # the printed list is the three-monomial piece; the full integrand is checked against the exact n=2 moments
    for k, want in ((1, 1.420551358e-9), (2, 3.522724342e-13), (3, 1.8925708934e-16), (4, 1.54994576705e-19)):
        v = expect_first_three(k).value
        ok &= record(7, f"numeric list k={k} rel 1e-4", _rel(v, want) <= 1e-4, f"(rel {_rel(v, want):.1e})")
    sh = Scenario.bures(HALF)
    for k in range(5):
        exact = float(bures_rebit_n2_ratio(k) * det_moment(sh, k))
        v = expect_pt_squared(k).value
        ok &= record(7, f"expectPtSquared({k}) = exact n=2 moment rel 1e-4", _rel(v, exact) <= 1e-4, f"(rel {_rel(v, exact):.1e})")
    dt = time.perf_counter() - t
    record(7, "runtime", True, f"({dt:.1f} s)")
    assert ok


# ---------------------------------------------------------------------------
# 8
# ---------------------------------------------------------------------------


def test_criterion_8_seqfit():
    """autoFit recovers every catalog rational function of total degree <= 12 from deg+2 samples."""
    t = time.perf_counter()
    ok = True
    for name, r in CATALOG.items():
        d = sum(r.degrees)
        if d > 12:
            continue
        ks = [k for k in range(100) if not r.is_pole(k)][: d + 2]
        got = auto_fit([(k, r(k)) for k in ks], 12)
        ok &= record(8, f"{name} {r.degrees}", got == r)
    dt = time.perf_counter() - t
    ok &= record(8, "runtime < 60 s", dt < 60, f"({dt:.2f} s)")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"] + (["-m", "not slow"] if "--quick" in sys.argv else [])))
