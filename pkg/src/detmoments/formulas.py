"""Closed-form determinant-moment expressions, evaluated exactly.

Conventions
-----------
``k`` is always an exact rational so that small positive proxies for ``k = 0``
(``k = 10**-20``) stay exact.  Ratios ``<|rho^PT|^n |rho|^k> / <|rho|^k>`` are
returned directly; the absolute moment ``<|rho|^k>`` itself needs Gamma
functions at non-integer ``k`` and is therefore only offered at integer ``k``.

Printed rational functions in ``k`` live in :data:`CATALOG`, keyed by a short
name.  Names ending in ``_printed`` are kept verbatim even where they are known
to be off (an index shift or a constant), so the corrections stay testable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedAlpha, UnsupportedScenario
from .exact import (
    ALPHA,
    K,
    N,
    ONE,
    AffineForm,
    Poly,
    RatFunc,
    RationalLike,
    as_rational,
    pochhammer,
)
from .hyper import HyperSeries, evaluate_limit, evaluate_terminating

HALF = Fraction(1, 2)


class Family(enum.Enum):
    TWO_QUBIT = "two-qubit"
    QUBIT_QUTRIT = "qubit-qutrit"


class Measure(enum.Enum):
    HS = "hilbert-schmidt"
    BURES = "bures"


@dataclass(frozen=True)
class Scenario:
    family: Family
    measure: Measure
    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.family is Family.QUBIT_QUTRIT and self.measure is Measure.BURES:
            raise UnsupportedScenario("qubit-qutrit states are supported under Hilbert-Schmidt only")

    @property
    def extrapolated(self) -> bool:
        """True when alpha lies outside the values the closed forms were checked at."""
        if self.measure is Measure.HS and self.family is Family.TWO_QUBIT:
            return False
        return self.alpha not in (Fraction(0), HALF, Fraction(1))

    @classmethod
    def bures(cls, alpha: RationalLike) -> "Scenario":
        return cls(Family.TWO_QUBIT, Measure.BURES, as_rational(alpha))

    @classmethod
    def hs(cls, alpha: RationalLike) -> "Scenario":
        return cls(Family.TWO_QUBIT, Measure.HS, as_rational(alpha))

    @classmethod
    def qubit_qutrit(cls, alpha: RationalLike) -> "Scenario":
        return cls(Family.QUBIT_QUTRIT, Measure.HS, as_rational(alpha))


def _scenario(s: Scenario) -> Scenario:
    if s.family is Family.QUBIT_QUTRIT and s.measure is Measure.BURES:
        raise UnsupportedScenario("qubit-qutrit states are supported under Hilbert-Schmidt only")
    return s


def _integer(k: Fraction, what: str) -> int:
    if k.denominator != 1 or k < 0:
        raise ValueError(f"{what} needs a nonnegative integer k, got {k}")
    return int(k)


# ---------------------------------------------------------------------------
# determinant moments and the R = F0(k+n)/F0(k) prefactors
# ---------------------------------------------------------------------------


def det_moment(s: Scenario, k: RationalLike) -> Fraction:
    """``<|rho|^k>`` for integer ``k >= 0``."""
    s = _scenario(s)
    kk = _integer(as_rational(k), "det_moment")
    return prefactor(s, kk, 0)


def prefactor(s: Scenario, n: int, k: RationalLike) -> Fraction:
    """``F0(k+n)/F0(k)`` written as finite Pochhammer products in ``n``.

    For Bures two-qubit states this is the non-hypergeometric factor in front
    of both the trial and hybrid series; for HS two-qubit states it is the
    leading factor of the 5F4 ratio; for qubit-qutrit states it is the ratio
    of the 6x6 determinant moments.
    """
    s = _scenario(s)
    if n < 0:
        raise ValueError("n must be nonnegative")
    k = as_rational(k)
    a = s.alpha
    if s.family is Family.QUBIT_QUTRIT:
        num = Fraction(1)
        for i in range(6):
            num *= pochhammer(k + i * a + 1, n)
        return num / pochhammer(6 * k + 30 * a + 6, 6 * n)
    if s.measure is Measure.BURES:
        num = pochhammer(k + HALF, n) * pochhammer(k + a + HALF, n) * pochhammer(2 * k + a + 1, 2 * n)
        den = (
            Fraction(2) ** (8 * n)
            * pochhammer(k + 2 * a + 1, n)
            * pochhammer(k + 3 * a + 1, n)
            * pochhammer(2 * k + 3 * a + Fraction(3, 2), 2 * n)
        )
        return num / den
    num = pochhammer(k + 1, n) * pochhammer(k + 1 + a, n) * pochhammer(k + 1 + 2 * a, n)
    den = Fraction(2) ** (6 * n) * pochhammer(k + 3 * a + Fraction(3, 2), n) * pochhammer(2 * k + 6 * a + Fraction(5, 2), 2 * n)
    return num / den


def step_ratio(s: Scenario, m: RationalLike) -> Fraction:
    """``F0(m+1)/F0(m)``; the building block of every ``R(n, k)``."""
    return prefactor(s, 1, m)


# ---------------------------------------------------------------------------
# printed rational functions
# ---------------------------------------------------------------------------


def _rf(num: list[int], den: list[int]) -> RatFunc:
    """Rational function from integer coefficient lists, highest degree first."""
    return RatFunc(Poly(reversed(num)), Poly(reversed(den)))


def _lin(*pairs: tuple[int, int], lead: int = 1) -> Poly:
    return Poly.from_linear_factors(pairs, lead)


CATALOG: dict[str, RatFunc] = {
    # two-qubit Bures first moment, before and after the k -> k+1 index fix
    "eq1_printed": RatFunc(
        Poly(reversed([8, 36, -82, -681, -1366, -885])),
        Poly(reversed([16, 192, 883, 1947, 2062, 840])) * 128,
    ),
    "eq2_printed": RatFunc(
        Poly(reversed([64, 128, -340, -1032, -1099, -384])),
        Poly([0, 1]) * Poly(reversed([8, -2, -1])) * Poly(reversed([8, 18, -5])),
    ),
    "eq3": _rf([8, 76, 142, -631, -2790, -2970], [2048, 34816, 231808, 756224, 1209984, 760320]),
    "eq5": _rf([64, 448, 812, -644, -3351, -2663], [16384, 188416, 847872, 1869824, 2023424, 860160]),
    # classical (alpha = 0) reductions
    "eq8": RatFunc(_lin((1, 1), (1, 1), (1, 1)), _lin((2, 3), (4, 5), (4, 7), lead=8)),
    "eq9": RatFunc(_lin((2, 1), (2, 1), (2, 1)), _lin((1, 1), (4, 3), (4, 5), lead=128)),
    # trial 6F5 expression at n = 1
    "fit1": _rf([8, 76, 142, -631, -2028, -1467], [2048, 34816, 231808, 756224, 1209984, 760320]),
    "fit2": _rf([64, 448, 812, -644, -2231, -1095], [16384, 188416, 847872, 1869824, 2023424, 860160]),
    # F2 at n = 1, alpha = 1 and 1/2
    "f2_complex": _rf([-96, -960, -2994, -3015], [2048, 34816, 231808, 756224, 1209984, 760320]),
    "f2_real": _rf([-16, -112, -245, -173], [1024, 11776, 52992, 116864, 126464, 53760]),
    # qubit-qutrit HS, n = 1
    "eq27": RatFunc(
        Poly(reversed([4, 40, 95, -220, -1149, -1170])),
        _lin((1, 4), (3, 11), (3, 13), (6, 23), (6, 25), lead=576),
    ),
    "eq28": RatFunc(
        Poly(reversed([1, 15, 37, -423, -2558, -3840])),
        _lin((2, 13), (3, 19), (3, 20), (6, 37), (6, 41), lead=72),
    ),
    "eq31": _rf([4, 20, -29, -195], [4, 20, 31, 15]),
    "eq32": _rf([1, 7, -34, -256], [1, 7, 14, 8]),
    "eq33": _rf([-10, -85, -235, -210], [31104, 622080, 4972320, 19854720, 39605856, 31574400]),
    "eq34_printed": _rf([4, 54, 211, 330], [3888, 126360, 1642140, 10666890, 34633182, 44963880]),
    # eq28 minus R(1, k): sign flipped and 236 k instead of 211 k against the printed form
    "eq34": _rf([-4, -54, -236, -330], [3888, 126360, 1642140, 10666890, 34633182, 44963880]),
    # hybrid outcomes at n = 1
    "hybrid_rebit_n1": RatFunc(
        Poly(reversed([128, 1248, 4104, 4130, -4637, -12494, -7095])),
        _lin((1, 2), (1, 2), (1, 3), (2, 3), (2, 5), (4, 13), lead=2048),
    ),
}

# n = 2 two-rebit Bures ratio (degree 10 over degree 10)
N2_NUMERATOR = Poly(
    reversed(
        [
            4096,
            86016,
            730624,
            3191808,
            7842576,
            16125680,
            63736088,
            248378840,
            557112761,
            644925323,
            303925362,
        ]
    )
)
N2_DENOMINATOR_SHAPE = _lin((1, 2), (1, 2), (1, 3), (1, 3), (2, 3), (2, 5), (2, 5), (2, 7), (2, 9), (2, 11))
N2_CONSTANT_PRINTED = 2**12
N2_CONSTANT = 2**22


def hybrid_qubit_n1(k: RationalLike) -> Fraction:
    """Partial-fraction form of the degree-7 two-qubit hybrid outcome at n = 1."""
    k = as_rational(k)
    return Fraction(1, 512) * (
        Fraction(-60) / (k + 4)
        - Fraction(384) / (2 * k + 9)
        + Fraction(15) / (4 * k + 9)
        - Fraction(315) / (4 * k + 11)
        + Fraction(192) / (4 * k + 17)
        + Fraction(576) / (4 * k + 19)
        + Fraction(120) / (k + 3)
        + 2
    )


def n2_numerator_horner(k: RationalLike) -> Fraction:
    """The nested form of the n = 2 numerator, kept separate as a cross-check."""
    k = as_rational(k)
    inner = 8 * k * (k + 21) + 1427
    inner = 32 * k * (k * inner + 6234) + 490161
    inner = 2 * k * (k * inner + 1007855) + 7967011
    inner = 8 * k * (k * inner + 31047355) + 557112761
    return k * (k * inner + 644925323) + 303925362


def _alpha_rf(alpha: Fraction, table: dict[Fraction, str]) -> RatFunc:
    try:
        return CATALOG[table[alpha]]
    except KeyError:
        raise UnsupportedAlpha(f"no closed form for alpha = {alpha}") from None


def bures_ratio_n1(alpha: RationalLike, k: RationalLike) -> Fraction:
    """Bures ``<|rho^PT| |rho|^k> / <|rho|^k>`` for alpha in {1/2, 1}."""
    rf = _alpha_rf(as_rational(alpha), {Fraction(1): "eq3", HALF: "eq5"})
    return rf(k)


def classical_ratio(measure: Measure, k: RationalLike) -> Fraction:
    return CATALOG["eq8" if measure is Measure.HS else "eq9"](k)


# ---------------------------------------------------------------------------
# hypergeometric ratios
# ---------------------------------------------------------------------------

_Q = Fraction


def hs_series() -> HyperSeries:
    """The balanced 5F4 multiplying the HS prefactor."""
    KN = K + N
    return HyperSeries(
        (-N, -K, ALPHA, ALPHA + HALF, -2 * K - 2 * N - 1 - 5 * ALPHA),
        (-KN - ALPHA, -KN - 2 * ALPHA, -KN / 2, -(KN - 1) / 2),
        Fraction(1),
        "hs-5F4",
    )


def trial_series() -> HyperSeries:
    """The 6F5 of the trial Bures expression."""
    KN = K + N
    return HyperSeries(
        (-N, -K, ALPHA, ALPHA + HALF, -2 * KN - 4 - 8 * ALPHA, -2 * KN - 3 - 2 * ALPHA),
        (-KN, -KN - 4 * ALPHA, -KN / 2 + _Q(1, 4), -KN / 2 + HALF, -2 * KN - 5),
        Fraction(1),
        "trial-6F5",
    )


def _evaluate(series: HyperSeries, alpha, n, k, semantics: str) -> Fraction:
    b = {"alpha": alpha, "n": n, "k": k}
    if semantics == "limit":
        return evaluate_limit(series, b, "k")
    if semantics == "strict":
        return evaluate_terminating(series, b)
    raise ValueError(f"unknown semantics {semantics!r}")


def hs_ratio(alpha: RationalLike, n: int, k: RationalLike, semantics: str = "limit") -> Fraction:
    """HS two-qubit ``<|rho^PT|^n |rho|^k> / <|rho|^k>`` (prefactor times 5F4).

    ``semantics="limit"`` resolves the 0/0 parameter collisions that occur at
    integer ``k`` by the limit in ``k``; ``"strict"`` truncates at the first
    nonpositive numerator parameter.
    """
    alpha, k = as_rational(alpha), as_rational(k)
    return prefactor(Scenario.hs(alpha), n, k) * _evaluate(hs_series(), alpha, n, k, semantics)


def trial_bures_ratio(alpha: RationalLike, n: int, k: RationalLike, semantics: str = "limit") -> Fraction:
    """Trial Bures expression: Bures prefactor times the 6F5."""
    alpha, k = as_rational(alpha), as_rational(k)
    return prefactor(Scenario.bures(alpha), n, k) * _evaluate(trial_series(), alpha, n, k, semantics)


# ---------------------------------------------------------------------------
# n = 1 Bures utility pieces
# ---------------------------------------------------------------------------


def joint_j(alpha: RationalLike, k: RationalLike) -> Fraction:
    """``J(alpha)``: the n = 1 Bures ratio with the prefactor divided out."""
    a, k = as_rational(alpha), as_rational(k)
    common = (k + 1) * (2 * k + 1) * (a + 2 * k + 2) * (3 * a + 2 * k)
    t1 = a * (2 * a + 1) * (4 * a - 1) * (4 * a + 1) / (common * (3 * a + k + 2))
    t2 = 2 * a * (2 * a + 1) * (4 * a + 4 * k + 5) * (8 * a + 4 * k + 3) / common
    return 1 - t1 - t2


def _r1_bures(a: Fraction, k: Fraction) -> Fraction:
    """The printed correction term; algebraically equal to R(1, k)."""
    return (
        (2 * k + 1) * (a + 2 * k + 1) * (a + 2 * k + 2) * (2 * a + 2 * k + 1)
        / (256 * (2 * a + k + 1) * (3 * a + k + 1) * (6 * a + 4 * k + 3) * (6 * a + 4 * k + 5))
    )


def f2_bures_n1(alpha: RationalLike, k: RationalLike, paper_literal: bool = False) -> Fraction:
    """``F2(1, k, alpha)`` for Bures two-qubit states.

    Since the ratio is ``R(1,k) * J`` and ``F1 = R + F2`` at n = 1, the
    consistent form is ``R(1,k) * (J - 1)``.  ``paper_literal=True`` returns the
    printed ``J - R(1,k)``, which does not reproduce the n = 1 closed forms.
    """
    a, k = as_rational(alpha), as_rational(k)
    r = _r1_bures(a, k)
    j = joint_j(a, k)
    if paper_literal:
        return j - r
    return r * (j - 1)


def num_alpha(alpha: RationalLike, k: RationalLike) -> Fraction:
    a, k = as_rational(alpha), as_rational(k)
    y = 6 * a + 3 * k + 4
    return (-7466 * a - 32 * (5 * a - 2) * y**3 + 6 * (569 * a - 260) * y + 3521) / 27


def den_alpha_factors(alpha: RationalLike, k: RationalLike) -> list[Fraction]:
    """The six linear factors of ``den(alpha)`` without the 128."""
    a, k = as_rational(alpha), as_rational(k)
    return [a, 2 * a + k + 1, 3 * a + k + 1, 3 * a + k + 2, 6 * a + 4 * k + 3, 6 * a + 4 * k + 5]


def den_alpha(alpha: RationalLike, k: RationalLike) -> Fraction:
    out = Fraction(128)
    for f in den_alpha_factors(alpha, k):
        out *= f
    return out


def candidate_f2_8f12(alpha: RationalLike, n: int, k: RationalLike) -> Fraction:
    """Pochhammer extension of ``num/den`` used as an F2 candidate.

    ``(num(alpha)|_{k -> k+n-1})_n / (2^(7n) prod_i (factor_i)_n)`` over the six
    factors of ``den(alpha)``; equals ``num/den`` at n = 1.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, k = as_rational(alpha), as_rational(k)
    num = pochhammer(num_alpha(a, k + n - 1), n)
    den = Fraction(2) ** (7 * n)
    for f in den_alpha_factors(a, k):
        den *= pochhammer(f, n)
    return num / den


# quartic eighth numerator parameter of the 8F12: {(i_alpha, i_k, i_n): coefficient}
QUARTIC_8F12: dict[tuple[int, int, int], int] = {
    (4, 0, 0): -1280, (3, 0, 0): -128, (2, 0, 0): 908, (1, 0, 0): -460,
    (1, 3, 0): -160, (0, 3, 0): 64, (2, 2, 0): -960, (1, 2, 0): 224,
    (1, 2, 1): -480, (0, 2, 1): 192, (0, 2, 0): 64, (3, 1, 0): -1920,
    (2, 1, 0): 128, (1, 1, 0): 582, (1, 1, 2): -480, (0, 1, 2): 192,
    (2, 1, 1): -1920, (1, 1, 1): 448, (0, 1, 1): 128, (0, 1, 0): -152,
    (1, 0, 3): -160, (0, 0, 3): 64, (2, 0, 2): -960, (1, 0, 2): 224,
    (0, 0, 2): 64, (3, 0, 1): -1920, (2, 0, 1): 128, (1, 0, 1): 582,
    (0, 0, 1): -152, (0, 0, 0): 75,
}


@dataclass(frozen=True)
class MultivariateParam:
    """Polynomial parameter in (alpha, k, n); only ``bind`` is needed."""

    terms: tuple[tuple[tuple[int, int, int], int], ...]

    def bind(self, alpha: RationalLike = 0, k: RationalLike = 0, n: RationalLike = 0) -> Fraction:
        a, kk, nn = as_rational(alpha), as_rational(k), as_rational(n)
        return sum((Fraction(c) * a**i * kk**j * nn**l for (i, j, l), c in self.terms), Fraction(0))

    def bind_map(self, b) -> Fraction:
        return self.bind(b.get("alpha", 0), b.get("k", 0), b.get("n", 0))


QUARTIC_PARAM = MultivariateParam(tuple(sorted(QUARTIC_8F12.items())))


def series_8f12() -> tuple[list[AffineForm], MultivariateParam, list[AffineForm], Fraction]:
    """Affine numerator parameters, the quartic, denominators and the argument."""
    KN = K + N
    base = -2 * ALPHA - (KN * 4) / 3
    num = [base - _Q(4, 3), base - 1, base - _Q(2, 3), base - _Q(2, 3), base - _Q(1, 3), base, -N]
    h = ALPHA * _Q(3, 2)
    den = [
        ALPHA, -KN + HALF, -3 * ALPHA - KN - 1, -h - KN - 1, -h - KN - _Q(3, 4),
        -h - KN - HALF, -h - KN - HALF, -h - KN - _Q(1, 4), -h - KN,
        -ALPHA - KN + HALF, -ALPHA / 2 - KN, -ALPHA / 2 - KN + HALF,
    ]
    return num, QUARTIC_PARAM, den, Fraction(729, 32768)


def evaluate_8f12(alpha: RationalLike, n: int, k: RationalLike) -> Fraction:
    """Terminating sum of the displayed 8F12 (terminates through ``-n``)."""
    num, quartic, den, z = series_8f12()
    b = {"alpha": as_rational(alpha), "k": as_rational(k), "n": Fraction(n)}
    nv = [p.bind_map(b) for p in num] + [quartic.bind_map(b)]
    dv = [q.bind_map(b) for q in den]
    total, term = Fraction(1), Fraction(1)
    for j in range(n):
        for p in nv:
            term *= p + j
        for q in dv:
            term /= q + j
        term = term * z / (j + 1)
        total += term
    return total


# ---------------------------------------------------------------------------
# qubit-qutrit n = 1
# ---------------------------------------------------------------------------


def qq_ratio_n1(alpha: RationalLike, k: RationalLike) -> Fraction:
    return _alpha_rf(as_rational(alpha), {HALF: "eq27", Fraction(1): "eq28"})(k)


def qq_simplified_n1(alpha: RationalLike, k: RationalLike) -> Fraction:
    return _alpha_rf(as_rational(alpha), {HALF: "eq31", Fraction(1): "eq32"})(k)


def f2_qq_n1(alpha: RationalLike, k: RationalLike, paper_literal: bool = False) -> Fraction:
    """Qubit-qutrit HS ``F2(1, k)``.

    At alpha = 1 the printed expression is not ``F1 - R``; the consistent form
    is used unless ``paper_literal`` is set.
    """
    one = "eq34_printed" if paper_literal else "eq34"
    return _alpha_rf(as_rational(alpha), {HALF: "eq33", Fraction(1): one})(k)


# ---------------------------------------------------------------------------
# n = 2 two-rebit Bures
# ---------------------------------------------------------------------------


def n2_rebit_ratio_rf(paper_literal: bool = False) -> RatFunc:
    const = N2_CONSTANT_PRINTED if paper_literal else N2_CONSTANT
    return RatFunc(N2_NUMERATOR, N2_DENOMINATOR_SHAPE * const)


def bures_rebit_n2_ratio(k: RationalLike, paper_literal: bool = False) -> Fraction:
    """``<|rho^PT|^2 |rho|^k> / <|rho|^k>`` for Bures two-rebit states.

    The printed denominator constant ``2^12`` is too small by ``2^10`` against
    the exact k = 0 and k = 1 moments; ``2^22`` is used unless
    ``paper_literal`` is set.
    """
    return n2_rebit_ratio_rf(paper_literal)(k)
