"""Named exact-identity suites.

Each suite returns a :class:`SuiteReport` made of line-oriented
:class:`~detmoments.utility.Record` entries (``alpha, n, k, lhs, rhs, equal``)
plus symbolic checks.  A suite passes only if every record is an exact
equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .exact import format_rational
from .formulas import (
    CATALOG,
    HALF,
    Measure,
    N2_NUMERATOR,
    Scenario,
    bures_ratio_n1,
    bures_rebit_n2_ratio,
    candidate_f2_8f12,
    classical_ratio,
    den_alpha,
    det_moment,
    evaluate_8f12,
    f2_bures_n1,
    f2_qq_n1,
    hs_ratio,
    joint_j,
    n2_numerator_horner,
    num_alpha,
    prefactor,
    qq_ratio_n1,
    qq_simplified_n1,
    trial_bures_ratio,
)
from .hyper import alpha_count, balance_gap, evaluate_terminating
from .utility import (
    QUBIT_QUTRIT,
    TWO_QUBIT_BURES,
    F2Model,
    Record,
    f2_hs,
    hybrid_10f9,
    hybrid_8f7,
    hybrid_moment,
    ptt_summation,
    r_from_det_moment,
    verify_8f12_reproduction,
)

__all__ = ["SuiteReport", "SUITES", "run_suite", "hybrid_10f9_grid", "qq_hybrid_grid"]

ONE = Fraction(1)
ALPHAS_N1 = (HALF, ONE)
ALPHAS_HYBRID = (HALF, ONE, Fraction(3, 2), Fraction(2))

BIGGY2 = Fraction(50654227, 1307993702400)
REBIT_N2_K1 = Fraction(11395427, 9630347469783040)
START = Fraction(215072950441, 5273830608076800)


@dataclass
class SuiteReport:
    name: str
    records: list[tuple[str, Record]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, label: str, alpha, n, k, lhs, rhs) -> None:
        self.records.append((label, Record(Fraction(alpha), n, Fraction(k), Fraction(lhs), Fraction(rhs))))

    @property
    def failures(self) -> list[tuple[str, Record]]:
        return [(lab, r) for lab, r in self.records if not r.equal]

    @property
    def passed(self) -> bool:
        return bool(self.records) and not self.failures

    def first_failure(self) -> tuple[str, Record] | None:
        f = self.failures
        return f[0] if f else None

    def summary(self) -> str:
        fails = self.failures
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.name}: {status} ({len(self.records) - len(fails)}/{len(self.records)} identities hold)"
        if fails:
            lab, r = fails[0]
            line += f"\n  first failure [{lab}] {r.line()}"
        return line

    def lines(self) -> Iterable[str]:
        for lab, r in self.records:
            yield f"[{lab}] {r.line()}"
        for note in self.notes:
            yield f"# {note}"


def _ks(full: bool, quick: int, extended: int) -> range:
    return range((extended if full else quick) + 1)


def suite_corrigenda(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("corrigenda")
    s_half = Scenario.bures(HALF)
    for k in _ks(full, 50, 200):
        rep.add("eq1(k+1)=eq3", 1, 1, k, CATALOG["eq1_printed"](k + 1), CATALOG["eq3"](k))
    for k in _ks(full, 50, 200):
        lhs = CATALOG["eq2_printed"](k + 1) * det_moment(s_half, k + 1) / det_moment(s_half, k)
        rep.add("eq2(k+1)*F0(k+1)/F0(k)=eq5", HALF, 1, k, lhs, CATALOG["eq5"](k))
    rep.add("bures n=1 k=0", 1, 1, 0, bures_ratio_n1(1, 0), Fraction(-1, 256))
    rep.add("bures n=1 k=0", HALF, 1, 0, bures_ratio_n1(HALF, 0), Fraction(-2663, 860160))
    num, den = CATALOG["eq3"].integer_form()
    rep.add("eq3 constant ratio", 1, 1, 0, num.coeffs[0] / den.coeffs[0], Fraction(-1, 256))
    rep.add("eq3 leading ratio", 1, 1, 0, num.lead / den.lead, Fraction(1, 256))
    return rep


def suite_classical(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("classical")
    for k in _ks(full, 30, 100):
        rep.add("hs alpha=0", 0, 1, k, hs_ratio(0, 1, k), classical_ratio(Measure.HS, k))
        rep.add("trial alpha=0", 0, 1, k, trial_bures_ratio(0, 1, k), classical_ratio(Measure.BURES, k))
    for k in _ks(full, 30, 100):
        rep.add("trial=fit1", 1, 1, k, trial_bures_ratio(1, 1, k), CATALOG["fit1"](k))
        rep.add("trial=fit2", HALF, 1, k, trial_bures_ratio(HALF, 1, k), CATALOG["fit2"](k))
    # trial and exact n = 1 numerators differ only in the two lowest coefficients
    for a, exact, trial in ((1, "eq3", "fit1"), (HALF, "eq5", "fit2")):
        ne, de = CATALOG[exact].integer_form()
        nt, dt = CATALOG[trial].integer_form()
        rep.add(f"{trial} denominator", a, 1, 0, int(de == dt), 1)
        for i in range(2, max(ne.degree, nt.degree) + 1):
            rep.add(f"{trial} coeff k^{i}", a, 1, 0, nt.coeffs[i], ne.coeffs[i])
    return rep


def suite_utility(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("utility")
    for a in ALPHAS_N1:
        r = r_from_det_moment(Scenario.bures(a))
        for k in _ks(full, 50, 200):
            rep.add("F1=R+F2 (n=1)", a, 1, k, bures_ratio_n1(a, k), r(1, k) + f2_bures_n1(a, k))
            rep.add("F2=num/den", a, 1, k, f2_bures_n1(a, k), num_alpha(a, k) / den_alpha(a, k))
            rep.add("ratio=R*J", a, 1, k, bures_ratio_n1(a, k), prefactor(Scenario.bures(a), 1, k) * joint_j(a, k))
    for a in (0, HALF, ONE, Fraction(2)):
        for s in (Scenario.bures(a), Scenario.hs(a), Scenario.qubit_qutrit(a)):
            r = r_from_det_moment(s)
            for n1 in range(4):
                for n2 in range(4):
                    for k in range(0, 11, 5):
                        rep.add(f"R multiplicative {s.family.value}/{s.measure.value}", a, n1 + n2, k,
                                r(n1 + n2, k), r(n1, k) * r(n2, k + n1))
    for a in ALPHAS_N1:
        rq = r_from_det_moment(Scenario.qubit_qutrit(a))
        for k in _ks(full, 30, 100):
            rep.add("qq ratio=prefactor*simplified", a, 1, k, qq_ratio_n1(a, k),
                    prefactor(Scenario.qubit_qutrit(a), 1, k) * qq_simplified_n1(a, k))
            rep.add("qq F1=R+F2 (n=1)", a, 1, k, qq_ratio_n1(a, k), rq(1, k) + f2_qq_n1(a, k))
    return rep


def hybrid_10f9_grid(alphas=ALPHAS_HYBRID, ns=range(6), ks=range(1, 7)) -> list[Record]:
    out = []
    for a in alphas:
        pref, series = hybrid_10f9(TWO_QUBIT_BURES, a)
        for n in ns:
            for k in ks:
                lhs = pref(n, k) * evaluate_terminating(series, {"alpha": a, "n": n, "k": k})
                out.append(Record(Fraction(a), n, Fraction(k), lhs, hybrid_moment(a, n, k)))
    return out


def suite_hybrid_10f9(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("hybrid-10f9")
    series = hybrid_10f9(TWO_QUBIT_BURES, 1)[1]
    gap = balance_gap(series)
    rep.add("balance gap", 0, 0, 0, int(gap.is_constant), 1)
    rep.add("balance gap", 0, 0, 0, gap.c0, 1)
    ac = alpha_count(series)
    rep.add("alpha count num", 0, 0, 0, ac[0], 7)
    rep.add("alpha count den", 0, 0, 0, ac[1], 6)
    for r in hybrid_10f9_grid():
        rep.records.append(("prefactor*10F9=summation", r))
    fails = [r for _, r in rep.failures]
    if fails:
        bad_n = sorted({r.n for r in fails})
        rep.notes.append(f"10F9 side disagrees with the summation at n in {bad_n}; see hybrid-8f7 for the form that agrees")
    return rep


def suite_hybrid_8f7(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("hybrid-8f7")
    s = hybrid_8f7()
    for a in ALPHAS_HYBRID:
        scen = Scenario.bures(a)
        for n in range(8 if full else 6):
            for k in range(0, 7):
                lhs = prefactor(scen, n, k) * evaluate_terminating(s, {"alpha": a, "n": n, "k": k})
                rep.add("prefactor*8F7=summation", a, n, k, lhs, hybrid_moment(a, n, k))
    return rep


def qq_hybrid_grid(alphas=ALPHAS_N1, ns=range(5), ks=range(1, 6), scenario: str = "qubit-qutrit") -> list[Record]:
    out = []
    for a in alphas:
        r = r_from_det_moment(Scenario.qubit_qutrit(a))
        series = hybrid_10f9(QUBIT_QUTRIT, a)[1]
        pscen = Scenario.qubit_qutrit(a) if scenario == "qubit-qutrit" else Scenario.bures(a)
        for n in ns:
            for k in ks:
                lhs = prefactor(pscen, n, k) * evaluate_terminating(series, {"alpha": a, "n": n, "k": k})
                out.append(Record(Fraction(a), n, Fraction(k), lhs, ptt_summation(f2_hs(a), r, n, k)))
    return out


def suite_qq_hybrid(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("qq-hybrid")
    series = hybrid_10f9(QUBIT_QUTRIT, 1)[1]
    gap = balance_gap(series)
    rep.add("balance gap c0", 0, 0, 0, gap.c0, 2)
    rep.add("balance gap alpha", 0, 0, 0, gap.c_alpha, 9)
    rep.add("balance gap k,n free", 0, 0, 0, int(gap.c_k == 0 and gap.c_n == 0), 1)
    rep.add("argument", 0, 0, 0, series.argument, Fraction(729, 4))
    for r in qq_hybrid_grid():
        rep.records.append(("qq prefactor*10F9=summation", r))
    fails = [r for _, r in rep.failures]
    if fails:
        rep.notes.append(
            f"qq 10F9 side is display-only: it matches the summation for n <= {min(r.n for r in fails) - 1} only"
        )
    return rep


def suite_8f12(full: bool = False, **_) -> SuiteReport:
    rep = SuiteReport("8f12")
    for a in ALPHAS_N1:
        for r in verify_8f12_reproduction(a, _ks(full, 30, 100)):
            rep.records.append(("summation(candidate F2) = closed n=1", r))
        f2 = F2Model(lambda n, k, a=a: candidate_f2_8f12(a, n, k))
        rr = r_from_det_moment(Scenario.bures(a))
        for n in range(4):
            for k in range(4):
                rep.add("prefactor*8F12 = summation(candidate F2)", a, n, k,
                        prefactor(Scenario.bures(a), n, k) * evaluate_8f12(a, n, k), ptt_summation(f2, rr, n, k))
    return rep


def suite_n2_rebit(full: bool = False, paper_literal: bool = False, **_) -> SuiteReport:
    from .oracle import assemble_n2

    rep = SuiteReport("n2-rebit" + (" (paper-literal)" if paper_literal else ""))
    det1 = det_moment(Scenario.bures(HALF), 1)
    r0 = bures_rebit_n2_ratio(0, paper_literal)
    r1 = bures_rebit_n2_ratio(1, paper_literal) * det1
    rep.add("ratio(0) = <|rho^PT|^2>", HALF, 2, 0, r0, BIGGY2)
    rep.add("ratio(1) * <|rho|> = k=1 moment", HALF, 2, 1, r1, REBIT_N2_K1)
    for k in _ks(full, 20, 100):
        rep.add("numerator = nested form", HALF, 2, k, N2_NUMERATOR(k), n2_numerator_horner(k))
    rep.add("assemble(0, three-monomial value)", HALF, 2, 0, assemble_n2(0, START), BIGGY2)
    if paper_literal:
        rep.notes.append(f"factor at k=0: {format_rational(r0 / BIGGY2)}; at k=1: {format_rational(r1 / REBIT_N2_K1)}")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "corrigenda": suite_corrigenda,
    "classical": suite_classical,
    "utility": suite_utility,
    "hybrid-10f9": suite_hybrid_10f9,
    "hybrid-8f7": suite_hybrid_8f7,
    "qq-hybrid": suite_qq_hybrid,
    "8f12": suite_8f12,
    "n2-rebit": suite_n2_rebit,
}


def run_suite(name: str, full: bool = False, paper_literal: bool = False) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(full=full, paper_literal=paper_literal)
