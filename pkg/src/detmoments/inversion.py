"""Legendre-series density reconstruction from moments, and tail masses.

With ``t = c1 x + t0`` mapping ``[a, b]`` onto ``[-1, 1]`` the approximant is

    f(x) = c1 * sum_{j=0..N} lambda_j P_j(t(x)),   lambda_j = (2j+1)/2 * E[P_j(t)],

whose first ``N+1`` moments reproduce the input.  Exact mode keeps every
``lambda_j`` rational.  Float mode works on fixed-point integers with
``bits`` fractional bits and certifies digits by re-running at doubled
precision.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from . import kernels
from .errors import PrecisionInsufficient
from .exact import RationalLike, as_rational, format_rational
from .moments import (
    FixedMoments,
    Mode,
    ModeKind,
    MomentSequence,
    Source,
    SUPPORTS,
    affine_map,
    build_fixed_moments,
    build_moments,
)

__all__ = [
    "DensityApprox",
    "SepProbEstimate",
    "legendre_table",
    "reconstruct",
    "tail_probability",
    "tail_weights",
    "separability_probability",
    "working_bits",
    "EXACT_MAX_N",
]

EXACT_MAX_N = 512


def working_bits(N: int) -> int:
    return max(4096, 8 * N)


def legendre_table(N: int) -> list[list[Fraction]]:
    """Monomial coefficients ``d[j][i]`` of ``P_j``, ``j = 0..N``."""
    table: list[list[Fraction]] = [[Fraction(1)]]
    if N >= 1:
        table.append([Fraction(0), Fraction(1)])
    for j in range(1, N):
        prev, cur = table[j - 1], table[j]
        nxt = [Fraction(0)] * (j + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += (2 * j + 1) * c / (j + 1)
        for i, c in enumerate(prev):
            nxt[i] -= j * c / (j + 1)
        table.append(nxt)
    return table


def _legendre_values(u: Fraction, N: int) -> list[Fraction]:
    vals = [Fraction(1), u]
    for j in range(1, N + 1):
        vals.append(((2 * j + 1) * u * vals[j] - j * vals[j - 1]) / (j + 1))
    return vals


def _legendre_values_fixed(p: int, q: int, N: int, bits: int) -> list[int]:
    one = 1 << bits
    vals = [one, one * p // q]
    for j in range(1, N + 1):
        vals.append(((2 * j + 1) * p * vals[j] - q * j * vals[j - 1]) // (q * (j + 1)))
    return vals


@dataclass(frozen=True)
class DensityApprox:
    """Degree-``N`` Legendre approximant on ``support``.

    ``legendre_coeffs`` are the ``lambda_j``.  In exact mode
    (``precision_bits == 0``) they are exact rationals; in float mode they are
    the rationals ``floor-rounded`` to ``precision_bits`` fractional bits.
    """

    support: tuple[Fraction, Fraction]
    degree: int
    legendre_coeffs: tuple[Fraction, ...]
    precision_bits: int = 0
    fixed_moments: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def c1(self) -> Fraction:
        return affine_map(self.support)[0]

    @property
    def t0(self) -> Fraction:
        return affine_map(self.support)[1]

    @property
    def mass(self) -> Fraction:
        return 2 * self.legendre_coeffs[0]

    def t_of(self, x: RationalLike) -> Fraction:
        c1, t0 = affine_map(self.support)
        return c1 * as_rational(x) + t0

    def value(self, x: RationalLike) -> Fraction:
        """Exact ``f(x)`` (rational) at a rational point."""
        t = self.t_of(x)
        vals = _legendre_values(t, self.degree)
        return self.c1 * sum((lam * vals[j] for j, lam in enumerate(self.legendre_coeffs)), Fraction(0))

    def evaluate(self, xs) -> "list[float]":
        """Fast float evaluation by Clenshaw recurrence."""
        import numpy as np

        a, b = (float(v) for v in self.support)
        lam = np.array([float(c) for c in self.legendre_coeffs])
        x = np.asarray(xs, dtype=float)
        t = (2.0 * x - a - b) / (b - a)
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        for j in range(self.degree, -1, -1):
            # Clenshaw for P_j: alpha_j(t) = (2j+1)t/(j+1), beta_{j+1} = -(j+1)/(j+2)
            bj = lam[j] + (2 * j + 1) / (j + 1) * t * b1 - (j + 1) / (j + 2) * b2
            b2, b1 = b1, bj
        return (2.0 / (b - a)) * b1

    def t_coeffs(self) -> list[Fraction]:
        """Monomial coefficients of ``sum_j lambda_j P_j(t)`` in ``t`` (cached)."""
        cached = self.__dict__.get("_t_coeffs")
        if cached is None:
            table = legendre_table(self.degree)
            cached = [Fraction(0)] * (self.degree + 1)
            for lam, row in zip(self.legendre_coeffs, table):
                if lam:
                    for i, di in enumerate(row):
                        if di:
                            cached[i] += lam * di
            object.__setattr__(self, "_t_coeffs", cached)
        return cached

    def t_moments(self, M: int) -> list[Fraction]:
        """``int_{-1}^{1} t^i g(t) dt`` for ``i = 0..M`` with ``g = sum_j lambda_j P_j``."""
        g = self.t_coeffs()
        out = []
        for i in range(M + 1):
            acc = Fraction(0)
            for j in range(i % 2, len(g), 2):
                if g[j]:
                    acc += g[j] * Fraction(2, i + j + 1)
            out.append(acc)
        return out

    def moments(self, M: int) -> list[Fraction]:
        """Exact ``int_a^b x^m f(x) dx`` for ``m = 0..M``."""
        c1, t0 = affine_map(self.support)
        tm = self.t_moments(M)
        # x = (t - t0)/c1 and f dx = g(t) dt
        out = []
        for m in range(M + 1):
            acc = sum((comb(m, r) * (-t0) ** (m - r) * tm[r] for r in range(m + 1)), Fraction(0))
            out.append(acc / c1**m)
        return out

    def moment(self, m: int) -> Fraction:
        """Exact ``int_a^b x^m f(x) dx``."""
        return self.moments(m)[m]


def reconstruct(ms: MomentSequence | FixedMoments, precision_bits: int = 0) -> DensityApprox:
    """Legendre approximant reproducing the supplied moments.

    ``precision_bits = 0`` with an exact :class:`MomentSequence` computes
    ``lambda_j = (2j+1)/2 sum_i d_{j,i} E[t^i]`` exactly, after the binomial
    change of variable.  Otherwise the fixed-point kernel is used.
    """
    if isinstance(ms, MomentSequence) and precision_bits == 0:
        N = ms.N
        c1, t0 = affine_map(ms.support)
        mus = ms.moments
        tmom = []
        for i in range(N + 1):
            acc = Fraction(0)
            for r in range(i + 1):
                acc += comb(i, r) * t0 ** (i - r) * c1**r * mus[r]
            tmom.append(acc)
        table = legendre_table(N)
        lam = tuple(
            Fraction(2 * j + 1, 2) * sum((d * tmom[i] for i, d in enumerate(table[j])), Fraction(0))
            for j in range(N + 1)
        )
        return DensityApprox(ms.support, N, lam, 0)
    fm = ms if isinstance(ms, FixedMoments) else ms.to_fixed(precision_bits or working_bits(ms.N))
    _, t0 = affine_map(fm.support)
    Ls = kernels.legendre_moments(list(fm.nus), t0.numerator, t0.denominator)
    lam = tuple(Fraction((2 * j + 1) * Lj, 1 << (fm.bits + 1)) for j, Lj in enumerate(Ls))
    return DensityApprox(fm.support, fm.N, lam, fm.bits, tuple(Ls))


def tail_probability(d: DensityApprox, threshold: RationalLike) -> Fraction:
    """``int_threshold^b f(x) dx`` (exact in exact mode, fixed point otherwise)."""
    a, b = d.support
    th = as_rational(threshold)
    if not a <= th <= b:
        raise ValueError("threshold outside the support")
    u = d.t_of(th)
    N = d.degree
    if d.precision_bits == 0 or d.fixed_moments is None:
        vals = _legendre_values(u, N + 1)
        tail = d.legendre_coeffs[0] * (1 - u)
        for j in range(1, N + 1):
            tail += d.legendre_coeffs[j] * (vals[j - 1] - vals[j + 1]) / (2 * j + 1)
        return tail
    S = d.precision_bits
    Ls = d.fixed_moments
    Pv = _legendre_values_fixed(u.numerator, u.denominator, N + 1, S)
    one = 1 << S
    acc = Ls[0] * (one - Pv[1])
    for j in range(1, N + 1):
        acc += Ls[j] * (Pv[j - 1] - Pv[j + 1])
    return Fraction(acc, 1 << (2 * S + 1))


def tail_weights(support: tuple[Fraction, Fraction], threshold: RationalLike, N: int) -> list[Fraction]:
    """Exact ``W_r`` with ``tail = sum_r W_r mu_r`` for the degree-``N`` approximant."""
    c1, t0 = affine_map(support)
    u = c1 * as_rational(threshold) + t0
    vals = _legendre_values(u, N + 1)
    cj = [(1 - u) / 2] + [(vals[j - 1] - vals[j + 1]) / 2 for j in range(1, N + 1)]
    table = legendre_table(N)
    # weight on E[t^i]
    wt = [Fraction(0)] * (N + 1)
    for j in range(N + 1):
        c = cj[j]
        if c == 0:
            continue
        for i, dji in enumerate(table[j]):
            if dji:
                wt[i] += dji * c
    # E[t^i] = sum_r C(i,r) t0^(i-r) c1^r mu_r
    W = []
    t0pow = [Fraction(1)]
    for _ in range(N):
        t0pow.append(t0pow[-1] * t0)
    c1r = Fraction(1)
    for r in range(N + 1):
        acc = Fraction(0)
        for i in range(r, N + 1):
            if wt[i]:
                acc += comb(i, r) * t0pow[i - r] * wt[i]
        W.append(acc * c1r)
        c1r *= c1
    return W


@dataclass(frozen=True)
class SepProbEstimate:
    value: str
    N: int
    mode: str
    precision_bits: int
    stable: bool
    source: str = ""
    alpha: str = ""
    exact: Fraction | None = field(default=None, compare=False)
    seconds: float = field(default=0.0, compare=False)

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> str:
        return json.dumps(
            {
                "source": self.source,
                "alpha": self.alpha,
                "mode": self.mode,
                "N": self.N,
                "precision_bits": self.precision_bits,
                "estimate": self.value,
                "stable": self.stable,
            }
        )


def _decimal(q: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(+(Decimal(q.numerator) / Decimal(q.denominator)))


def _fixed_estimate(source, alpha, mode, N, bits, progress=None) -> Fraction:
    fm = build_fixed_moments(source, alpha, mode, N, bits, progress)
    d = reconstruct(fm)
    tail = tail_probability(d, 0)
    return tail / d.mass


def separability_probability(
    source: Source,
    alpha: RationalLike,
    mode: Mode,
    N: int,
    precision_bits: int | None = None,
    digits: int = 15,
    stability_tol: Fraction = Fraction(1, 10**12),
    max_doublings: int = 2,
    progress: Callable[[str], None] | None = None,
) -> SepProbEstimate:
    """Estimated probability mass above 0, normalised by ``mu_0``.

    ``precision_bits = 0`` forces exact arithmetic; ``None`` picks exact mode
    for ``N <= 512`` and ``max(4096, 8N)`` bits otherwise.  Float estimates are
    accepted once two successive precisions agree to ``stability_tol``.
    """
    a = as_rational(alpha)
    start = time.perf_counter()
    if precision_bits is None:
        precision_bits = 0 if N <= EXACT_MAX_N else working_bits(N)
    if precision_bits == 0:
        ms = build_moments(source, a, mode, N)
        W = tail_weights(ms.support, 0, N)
        est = sum((w * m for w, m in zip(W, ms.moments)), Fraction(0)) / ms.moments[0]
        return SepProbEstimate(
            _decimal(est, digits), N, mode.kind.value, 0, True, source.value,
            format_rational(a), est, time.perf_counter() - start,
        )
    bits = precision_bits
    prev = _fixed_estimate(source, a, mode, N, bits)
    if progress:
        progress(f"bits={bits} estimate={float(prev):.15g}")
    for _ in range(max_doublings):
        bits *= 2
        cur = _fixed_estimate(source, a, mode, N, bits)
        if progress:
            progress(f"bits={bits} estimate={float(cur):.15g}")
        if abs(cur - prev) <= stability_tol:
            return SepProbEstimate(
                _decimal(cur, digits), N, mode.kind.value, bits, True, source.value,
                format_rational(a), cur, time.perf_counter() - start,
            )
        prev = cur
    raise PrecisionInsufficient(f"estimates still moving at {bits} bits for N = {N}")
