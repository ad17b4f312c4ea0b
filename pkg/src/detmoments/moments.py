"""Moment sequences fed to the inversion: sources, evaluation modes, supports.

Two evaluation modes are used.

``K_ZERO_PROXY``
    Moments of ``|rho^PT|`` on ``[-1/16, 1/256]`` taken at a tiny positive ``k``
    (default ``10**-20``) instead of ``k = 0``.  They are normalised so that
    ``mu_0 = 1``; then ``mu_n = ratio(n, eps)`` exactly, and the Gamma-function
    value ``<|rho|^eps>`` never has to be formed.
``BALANCED_KN``
    Moments of ``|rho^PT| |rho|`` on ``[-2^-12 3^-3, 2^-16]`` from ``n = k``:
    ``mu_n = ratio(n, n) <|rho|^n> = F0(2n) * series(n, n)``.

Each source is ``prefactor x terminating series`` so that high-precision
moments can be generated by the fixed-point kernel.  ``HYBRID_SUMMATION``
uses the 8F7 that equals the binomial summation term by term.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable

from . import kernels
from .exact import RationalLike, as_rational
from .formulas import Scenario, hs_series, prefactor, trial_series
from .hyper import HyperSeries, evaluate_terminating
from .utility import TWO_QUBIT_BURES, hybrid_10f9, hybrid_8f7, hybrid_moment

DEFAULT_EPS = Fraction(1, 10**20)


class Variable(enum.Enum):
    PT_DET = "pt-det"
    PT_TIMES_DET = "pt-times-det"


SUPPORTS: dict[Variable, tuple[Fraction, Fraction]] = {
    Variable.PT_DET: (Fraction(-1, 16), Fraction(1, 256)),
    Variable.PT_TIMES_DET: (Fraction(-1, 2**12 * 3**3), Fraction(1, 2**16)),
}


class Source(enum.Enum):
    HS_EQ6 = "hs"
    TRIAL_EQ10 = "trial"
    HYBRID_SUMMATION = "hybrid-summation"
    HYBRID_10F9 = "hybrid"


class ModeKind(enum.Enum):
    K_ZERO_PROXY = "k-zero"
    BALANCED_KN = "balanced"


@dataclass(frozen=True)
class Mode:
    kind: ModeKind
    eps: Fraction = DEFAULT_EPS

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", as_rational(self.eps))
        if self.kind is ModeKind.K_ZERO_PROXY and self.eps <= 0:
            raise ValueError("the k = 0 proxy must be a positive rational")

    @classmethod
    def k_zero(cls, eps: RationalLike = DEFAULT_EPS) -> "Mode":
        return cls(ModeKind.K_ZERO_PROXY, as_rational(eps))

    @classmethod
    def balanced(cls) -> "Mode":
        return cls(ModeKind.BALANCED_KN)

    @property
    def variable(self) -> Variable:
        return Variable.PT_DET if self.kind is ModeKind.K_ZERO_PROXY else Variable.PT_TIMES_DET

    def k_for(self, n: int) -> Fraction:
        return self.eps if self.kind is ModeKind.K_ZERO_PROXY else Fraction(n)


@dataclass(frozen=True)
class MomentSequence:
    """Exact moments ``mu_0..mu_N`` of a distribution on ``support``."""

    support: tuple[Fraction, Fraction]
    moments: tuple[Fraction, ...]
    variable: Variable | None = None

    def __post_init__(self) -> None:
        a, b = (as_rational(x) for x in self.support)
        if not a < b:
            raise ValueError("support must satisfy a < b")
        object.__setattr__(self, "support", (a, b))
        object.__setattr__(self, "moments", tuple(as_rational(m) for m in self.moments))
        if not self.moments:
            raise ValueError("need at least mu_0")
        if self.moments[0] <= 0:
            raise ValueError("mu_0 must be positive")

    @property
    def N(self) -> int:
        return len(self.moments) - 1

    def to_fixed(self, bits: int) -> "FixedMoments":
        c1, t0 = affine_map(self.support)
        nus = []
        scale = Fraction(1 << bits)
        for r, mu in enumerate(self.moments):
            v = scale * c1**r * mu
            nus.append(v.numerator // v.denominator)
        return FixedMoments(self.support, bits, tuple(nus), self.variable)


@dataclass(frozen=True)
class FixedMoments:
    """Scaled moments ``nu_r = floor(2^bits * c1^r * mu_r)``, ``c1 = 2/(b-a)``."""

    support: tuple[Fraction, Fraction]
    bits: int
    nus: tuple[int, ...]
    variable: Variable | None = None

    @property
    def N(self) -> int:
        return len(self.nus) - 1


def affine_map(support: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    """``(c1, t0)`` with ``t = c1*x + t0`` sending ``[a, b]`` onto ``[-1, 1]``."""
    a, b = support
    return 2 / (b - a), -(a + b) / (b - a)


# ---------------------------------------------------------------------------
# source definitions
# ---------------------------------------------------------------------------


def _scenario(source: Source, alpha: Fraction) -> Scenario:
    return Scenario.hs(alpha) if source is Source.HS_EQ6 else Scenario.bures(alpha)


def source_series(source: Source, alpha: RationalLike) -> HyperSeries:
    if source is Source.HS_EQ6:
        return hs_series()
    if source is Source.TRIAL_EQ10:
        return trial_series()
    if source is Source.HYBRID_10F9:
        return hybrid_10f9(TWO_QUBIT_BURES, alpha)[1]
    if source is Source.HYBRID_SUMMATION:
        return hybrid_8f7()
    raise ValueError(source)


def source_ratio(source: Source, alpha: RationalLike, n: int, k: RationalLike) -> Fraction:
    """Exact ``<|rho^PT|^n |rho|^k> / <|rho|^k>`` for a source.

    ``HYBRID_SUMMATION`` evaluates the binomial summation itself; the other
    sources evaluate ``prefactor x series`` with strict termination.
    """
    a, k = as_rational(alpha), as_rational(k)
    if source is Source.HYBRID_SUMMATION:
        return hybrid_moment(a, n, k)
    s = source_series(source, a)
    return prefactor(_scenario(source, a), n, k) * evaluate_terminating(s, {"alpha": a, "n": n, "k": k})


def build_moments(source: Source, alpha: RationalLike, mode: Mode, N: int) -> MomentSequence:
    """Exact moment sequence, normalised to ``mu_0 = 1`` in k-zero mode."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    a = as_rational(alpha)
    scen = _scenario(source, a)
    mus = []
    if mode.kind is ModeKind.K_ZERO_PROXY:
        for n in range(N + 1):
            mus.append(source_ratio(source, a, n, mode.eps))
    else:
        f0 = Fraction(1)
        for n in range(N + 1):
            if n:
                f0 *= prefactor(scen, 1, 2 * n - 2) * prefactor(scen, 1, 2 * n - 1)
            mus.append(f0 * source_ratio(source, a, n, n) / prefactor(scen, n, n))
    return MomentSequence(SUPPORTS[mode.variable], tuple(mus), mode.variable)


def _integer_params(series: HyperSeries, bindings) -> tuple[list[int], list[int], int, int, int]:
    nv, dv = series.bind(bindings)
    z = series.argument
    L = lcm(*(p.denominator for p in nv + dv))
    num = [int(p * L) for p in nv]
    den = [int(q * L) for q in dv]
    extra = len(dv) - len(nv)
    zn, zd = z.numerator, z.denominator
    # each step divides by L^(p - q); fold the surplus power of L into z
    if extra >= 0:
        zn *= L**extra
    else:
        zd *= L ** (-extra)
    return num, den, L, zn, zd


def build_fixed_moments(
    source: Source,
    alpha: RationalLike,
    mode: Mode,
    N: int,
    bits: int,
    progress: Callable[[int], None] | None = None,
) -> FixedMoments:
    """Fixed-point scaled moments ``nu_n ~ 2^bits c1^n mu_n`` via the kernels."""
    a = as_rational(alpha)
    scen = _scenario(source, a)
    series = source_series(source, a)
    support = SUPPORTS[mode.variable]
    c1, _ = affine_map(support)
    T0 = 1 << bits
    nus = []
    for n in range(N + 1):
        if n:
            if mode.kind is ModeKind.K_ZERO_PROXY:
                f = c1 * prefactor(scen, 1, mode.eps + n - 1)
            else:
                f = c1 * prefactor(scen, 1, 2 * n - 2) * prefactor(scen, 1, 2 * n - 1)
            T0 = T0 * f.numerator // f.denominator
        num, den, L, zn, zd = _integer_params(series, {"alpha": a, "n": n, "k": mode.k_for(n)})
        nus.append(kernels.hyp_fixed_sum(num, den, L, zn, zd, n, T0))
        if progress is not None:
            progress(n)
    return FixedMoments(support, bits, tuple(nus), mode.variable)
