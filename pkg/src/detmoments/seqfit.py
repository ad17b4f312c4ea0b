"""Exact rational-function fitting to sequences of rational values.

A fit of numerator degree ``p`` and denominator degree ``q`` solves the
homogeneous system ``v_i Q(x_i) - P(x_i) = 0`` with ``x_i = k_i + offset`` by
fraction-free integer elimination.  Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import AmbiguousFit, NoFit
from .exact import Poly, RatFunc, RationalLike, as_rational

__all__ = ["FitProblem", "fit_rational", "shift_index", "auto_fit", "normalize_values"]


@dataclass(frozen=True)
class FitProblem:
    values: tuple[tuple[int, Fraction], ...]
    num_degree: int
    den_degree: int
    index_offset: int = 0

    def __post_init__(self) -> None:
        vals = tuple((int(k), as_rational(v)) for k, v in self.values)
        object.__setattr__(self, "values", vals)
        if self.num_degree < 0 or self.den_degree < 0:
            raise ValueError("degrees must be nonnegative")

    @property
    def determined(self) -> bool:
        return len(self.values) >= self.num_degree + self.den_degree + 2


def normalize_values(values: Iterable) -> list[tuple[int, Fraction]]:
    """Accept ``[(k, v), ...]``, ``{k: v}`` or a bare list indexed from 0."""
    if isinstance(values, dict):
        items = list(values.items())
    else:
        items = list(values)
    out = []
    for i, item in enumerate(items):
        if isinstance(item, (tuple, list)) and len(item) == 2:
            out.append((int(item[0]), as_rational(item[1])))
        else:
            out.append((i, as_rational(item)))
    return out


def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = reduce(lcm, (x.denominator for x in row), 1)
    ints = [int(x * den) for x in row]
    g = reduce(gcd, ints, 0)
    return [x // g for x in ints] if g > 1 else ints


def _nullspace(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the integer matrix's right nullspace (fraction-free elimination)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(len(m)):
            if i == r or m[i][c] == 0:
                continue
            f, g_ = m[i][c], pr[c]
            row = [g_ * a - f * b for a, b in zip(m[i], pr)]
            g = reduce(gcd, row, 0)
            m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = Fraction(-m[i][fcol], m[i][pc])
        basis.append(vec)
    return basis


def fit_rational(fp: FitProblem) -> RatFunc:
    """Reduced ``P/Q`` with ``deg P <= p``, ``deg Q <= q`` through every point.

    Raises :class:`NoFit` when no such function exists or a sample is a pole,
    and :class:`AmbiguousFit` when distinct reduced functions fit.
    """
    p, q, off = fp.num_degree, fp.den_degree, fp.index_offset
    ncols = (p + 1) + (q + 1)
    rows = []
    for k, v in fp.values:
        x = Fraction(k + off)
        # unknowns: a_0..a_p, b_0..b_q ; equation -P(x) + v Q(x) = 0
        row = [-(x**i) for i in range(p + 1)] + [v * x**i for i in range(q + 1)]
        rows.append(_int_row(row))
    basis = _nullspace(rows, ncols)
    if not basis:
        raise NoFit(f"no rational function of degree ({p},{q}) fits")
    candidates: list[RatFunc] = []
    for vec in basis:
        num = Poly(vec[: p + 1])
        den = Poly(vec[p + 1 :])
        if den.is_zero():
            continue
        r = RatFunc(num, den)
        if r.num.degree > p or r.den.degree > q:
            continue
        ok = True
        for k, v in fp.values:
            x = k + off
            if r.is_pole(x) or r(x) != v:
                ok = False
                break
        if ok and r not in candidates:
            candidates.append(r)
    if not candidates:
        raise NoFit(f"no pole-free rational function of degree ({p},{q}) fits")
    if len(candidates) > 1:
        raise AmbiguousFit(f"{len(candidates)} distinct fits of degree ({p},{q})")
    if len(basis) > 1:
        # a larger nullspace must still collapse to one reduced function
        for vec in basis:
            den = Poly(vec[p + 1 :])
            if den.is_zero():
                continue
            r = RatFunc(Poly(vec[: p + 1]), den)
            if r != candidates[0] and all(not r.is_pole(k + off) for k, _ in fp.values):
                raise AmbiguousFit(f"solution space of dimension {len(basis)} does not collapse")
    return candidates[0]


def shift_index(r: RatFunc, delta: int) -> RatFunc:
    """``r(k + delta)``."""
    return r.shift(delta)


def auto_fit(values: Iterable, max_total_degree: int, index_offset: int = 0) -> RatFunc:
    """Lowest total degree fit, ties broken by smaller denominator degree.

    Degree pairs that are not over-determined by at least one point are skipped.
    """
    pts = normalize_values(values)
    for total in range(max_total_degree + 1):
        for q in range(total + 1):
            p = total - q
            fp = FitProblem(tuple(pts), p, q, index_offset)
            if not fp.determined:
                continue
            try:
                return fit_rational(fp)
            except (NoFit, AmbiguousFit):
                continue
    raise NoFit(f"no fit with total degree <= {max_total_degree} from {len(pts)} values")
