"""F0/F1/F2/R utility functions and the binomial summation built on them.

With ``R(n, k) = F0(k+n)/F0(k)`` and ``F2(n, k) = <|rho|^k (|rho^PT|-|rho|)^n>/<|rho|^k>``
the expansion of ``|rho^PT|^n`` in powers of ``|rho^PT| - |rho|`` gives

    F1(n, k) = sum_j C(n, j) F2(j, k+n-j) R(n-j, k).

Substituting the HS two-qubit ``F2`` while keeping the Bures ``R`` yields the
"hybrid" moments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable

from .errors import NotAvailable
from .exact import ALPHA, K, N, AffineForm, Poly, RatFunc, RationalLike, as_rational, format_rational, pochhammer
from .formulas import (
    CATALOG,
    HALF,
    Scenario,
    bures_ratio_n1,
    candidate_f2_8f12,
    f2_bures_n1,
    n2_rebit_ratio_rf,
    prefactor,
)
from .hyper import HyperSeries, evaluate_terminating

Evaluator = Callable[[int, Fraction], Fraction]

__all__ = [
    "F2Model",
    "RModel",
    "r_from_det_moment",
    "f2_hs",
    "f2_bures",
    "f2_bures_n2_rebit_rf",
    "ptt_summation",
    "hybrid_moment",
    "hybrid_10f9",
    "hybrid_8f7",
    "TWO_QUBIT_BURES",
    "QUBIT_QUTRIT",
    "Record",
    "verify_8f12_reproduction",
]


@dataclass(frozen=True)
class F2Model:
    evaluator: Evaluator
    label: str = ""

    def __call__(self, n: int, k: RationalLike) -> Fraction:
        if n == 0:
            return Fraction(1)
        return self.evaluator(n, as_rational(k))


@dataclass(frozen=True)
class RModel:
    evaluator: Evaluator
    label: str = ""

    def __call__(self, n: int, k: RationalLike) -> Fraction:
        if n == 0:
            return Fraction(1)
        return self.evaluator(n, as_rational(k))


def r_from_det_moment(s: Scenario) -> RModel:
    return RModel(lambda n, k: prefactor(s, n, k), f"R[{s.family.value},{s.measure.value},alpha={s.alpha}]")


def f2_hs(alpha: RationalLike) -> F2Model:
    """HS two-qubit ``F2(n, k)`` as a Pochhammer ratio."""
    a = as_rational(alpha)

    def ev(n: int, k: Fraction) -> Fraction:
        num = pochhammer(a, n) * pochhammer(a + HALF, n) * pochhammer(-2 * k - 2 * n - 5 * a - 1, n)
        den = (
            Fraction(2) ** (6 * n)
            * pochhammer(k + 3 * a + Fraction(5, 4), n)
            * pochhammer(k + 3 * a + Fraction(3, 2), n)
            * pochhammer(k + 3 * a + Fraction(7, 4), n)
        )
        return num / den

    return F2Model(ev, f"F2-HS(alpha={a})")


def _bures_r1_rf() -> RatFunc:
    """R(1, k) at alpha = 1/2 as a rational function of k."""
    num = Poly.from_linear_factors([(1, HALF), (1, 1), (2, Fraction(3, 2)), (2, Fraction(5, 2))])
    den = Poly.from_linear_factors([(1, 2), (1, Fraction(5, 2)), (2, 3), (2, 4)], 256)
    return RatFunc(num, den)


def f2_bures_n2_rebit_rf(paper_literal: bool = False) -> RatFunc:
    """``F2(2, k, 1/2)`` solved from the n = 2 ratio and the n <= 1 pieces.

    ``F1(2,k) = F2(2,k) + 2 F2(1,k+1) R(1,k) + R(2,k)`` with ``R(2,k) = R(1,k) R(1,k+1)``.
    """
    r1 = _bures_r1_rf()
    f1 = n2_rebit_ratio_rf(paper_literal)
    return f1 - 2 * CATALOG["f2_real"].shift(1) * r1 - r1 * r1.shift(1)


def f2_bures(alpha: RationalLike, paper_literal: bool = False) -> F2Model:
    """Bures ``F2`` where a closed form exists: n <= 1, and n = 2 at alpha = 1/2."""
    a = as_rational(alpha)
    n2 = f2_bures_n2_rebit_rf(paper_literal) if a == HALF else None

    def ev(n: int, k: Fraction) -> Fraction:
        if n == 1:
            return f2_bures_n1(a, k, paper_literal)
        if n == 2 and n2 is not None:
            return n2(k)
        raise NotAvailable(f"no closed Bures F2 for n = {n}, alpha = {a}")

    return F2Model(ev, f"F2-Bures(alpha={a})")


def ptt_summation(f2: F2Model, r: RModel, n: int, k: RationalLike) -> Fraction:
    """``sum_{j=0..n} C(n,j) f2(j, k+n-j) r(n-j, k)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = as_rational(k)
    total = Fraction(0)
    for j in range(n + 1):
        total += comb(n, j) * f2(j, k + n - j) * r(n - j, k)
    return total


def hybrid_moment(alpha: RationalLike, n: int, k: RationalLike) -> Fraction:
    """HS ``F2`` summed against the Bures ``R``."""
    a = as_rational(alpha)
    return ptt_summation(f2_hs(a), r_from_det_moment(Scenario.bures(a)), n, k)


# ---------------------------------------------------------------------------
# 10F9 hybrid parameter lists
# ---------------------------------------------------------------------------

TWO_QUBIT_BURES = "two-qubit-bures"
QUBIT_QUTRIT = "qubit-qutrit"

_q = Fraction


def _hybrid_series(variant: str) -> HyperSeries:
    KN = K + N
    if variant == TWO_QUBIT_BURES:
        num = (
            ALPHA, ALPHA + HALF, -N, -K, -5 * ALPHA - 2 * K - 2 * N - 1, -KN,
            -3 * ALPHA - KN, -2 * ALPHA - KN,
            -ALPHA * _q(3, 2) - KN - _q(1, 4), -ALPHA * _q(3, 2) - KN + _q(1, 4),
        )
        den = (
            -KN + HALF, -3 * ALPHA - KN - _q(3, 4), -3 * ALPHA - KN - HALF,
            -3 * ALPHA - KN - _q(1, 4), -ALPHA - KN + HALF, -ALPHA / 2 - KN,
            -ALPHA / 2 - KN + HALF, -KN / 2, -KN / 2 + HALF,
        )
        return HyperSeries(num, den, Fraction(1), "hybrid-10F9")
    if variant == QUBIT_QUTRIT:
        c = -5 * ALPHA - KN
        num = (
            ALPHA, ALPHA + HALF, -K, -5 * ALPHA - 2 * K - 2 * N - 1,
            c - _q(5, 6), c - _q(2, 3), c - HALF, c - _q(1, 3), c - _q(1, 6), -N,
        )
        den = (
            -4 * ALPHA - KN, -3 * ALPHA - KN - _q(3, 4), -3 * ALPHA - KN - HALF,
            -3 * ALPHA - KN - _q(1, 4), -3 * ALPHA - KN, -2 * ALPHA - KN, -ALPHA - KN,
            -KN / 2, -KN / 2 + HALF,
        )
        return HyperSeries(num, den, Fraction(729, 4), "qq-hybrid-10F9")
    raise ValueError(f"unknown variant {variant!r}")


def hybrid_10f9(variant: str, alpha: RationalLike):
    """Return ``(prefactor(n, k), series)`` for the printed hybrid 10F9.

    The two-qubit variant uses the Bures prefactor.  The qubit-qutrit variant
    uses the 6x6 HS prefactor: a grid check shows it reproduces the summation
    at n <= 1 while the Bures prefactor already fails at n = 1.  Neither printed
    series equals its summation for n >= 2 (see :func:`hybrid_8f7`).
    """
    a = as_rational(alpha)
    s = Scenario.bures(a) if variant == TWO_QUBIT_BURES else Scenario.qubit_qutrit(a)
    series = _hybrid_series(variant)
    return (lambda n, k: prefactor(s, n, k)), series


def hybrid_8f7() -> HyperSeries:
    """Hypergeometric form that does equal the two-qubit hybrid summation.

    Obtained by rewriting each summand ``C(n,j) F2_HS(j, K-j) R(n-j, k)``
    relative to ``R(n, k)`` (``K = k + n``); argument 4.
    """
    KN = K + N
    h = ALPHA * _q(3, 2)
    num = (
        -N, ALPHA, ALPHA + HALF, -5 * ALPHA - 2 * KN - 1, -3 * ALPHA - KN,
        -2 * ALPHA - KN, -h - KN - _q(1, 4), -h - KN + _q(1, 4),
    )
    den = (
        -3 * ALPHA - KN - _q(1, 4), -3 * ALPHA - KN - HALF, -3 * ALPHA - KN - _q(3, 4),
        HALF - KN, HALF - ALPHA - KN, -ALPHA / 2 - KN, HALF - ALPHA / 2 - KN,
    )
    return HyperSeries(num, den, Fraction(4), "hybrid-8F7")


# ---------------------------------------------------------------------------
# verification records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Record:
    alpha: Fraction
    n: int
    k: Fraction
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def line(self) -> str:
        return (
            f"alpha={format_rational(self.alpha)} n={self.n} k={format_rational(self.k)} "
            f"lhs={format_rational(self.lhs)} rhs={format_rational(self.rhs)} equal={self.equal}"
        )


def verify_8f12_reproduction(alpha: RationalLike, k_range: Iterable[int]) -> list[Record]:
    """Compare the n = 1 summation with the candidate F2 against the closed form."""
    a = as_rational(alpha)
    f2 = F2Model(lambda n, k: candidate_f2_8f12(a, n, k), "F2-8F12")
    r = r_from_det_moment(Scenario.bures(a))
    out = []
    for k in k_range:
        kk = as_rational(k)
        out.append(Record(a, 1, kk, ptt_summation(f2, r, 1, kk), bures_ratio_n1(a, kk)))
    return out


def first_failure(records: Iterable[Record]) -> Record | None:
    for r in records:
        if not r.equal:
            return r
    return None
