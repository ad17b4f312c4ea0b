"""Terminating generalized hypergeometric series with affine parameters.

A :class:`HyperSeries` stores the numerator and denominator parameter lists as
:class:`~detmoments.exact.AffineForm` objects together with an exact argument.
Evaluation binds ``alpha``, ``k`` and ``n`` to rationals and sums the finite
series by term recursion.

Two evaluation semantics are offered:

* :func:`evaluate_terminating` is strict.  The series stops at the first
  nonpositive-integer numerator parameter and any earlier zero denominator is
  an error.
* :func:`evaluate_limit` takes the limit ``k -> k0`` (or another variable)
  factor by factor, which resolves 0/0 collisions that appear when two
  parameters hit nonpositive integers together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Mapping, Sequence

from .errors import NotTerminating, PoleBeforeTermination
from .exact import AffineForm, RationalLike, as_rational, format_rational

__all__ = [
    "HyperSeries",
    "termination_index",
    "evaluate_terminating",
    "evaluate_direct",
    "evaluate_limit",
    "balance_gap",
    "alpha_count",
]

_VARS = ("alpha", "k", "n")


def _bindings(b: Mapping[str, RationalLike] | None) -> dict[str, Fraction]:
    b = dict(b or {})
    extra = set(b) - set(_VARS)
    if extra:
        raise KeyError(f"unknown binding(s): {sorted(extra)}")
    return {v: as_rational(b.get(v, 0)) for v in _VARS}


def _is_nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


@dataclass(frozen=True, eq=False)
class HyperSeries:
    """``pFq(num; den; argument)`` with affine parameters."""

    num: tuple[AffineForm, ...]
    den: tuple[AffineForm, ...]
    argument: Fraction = Fraction(1)
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "num", tuple(self.num))
        object.__setattr__(self, "den", tuple(self.den))
        object.__setattr__(self, "argument", as_rational(self.argument))

    @property
    def p(self) -> int:
        return len(self.num)

    @property
    def q(self) -> int:
        return len(self.den)

    def _key(self):
        return (sorted(map(str, self.num)), sorted(map(str, self.den)), self.argument)

    # order-insensitive on each list
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HyperSeries):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        k = self._key()
        return hash((tuple(k[0]), tuple(k[1]), k[2]))

    def bind(self, bindings: Mapping[str, RationalLike]) -> tuple[list[Fraction], list[Fraction]]:
        b = _bindings(bindings)
        return [p.bind_map(b) for p in self.num], [q.bind_map(b) for q in self.den]

    def with_params(self, num: Iterable[AffineForm] | None = None, den: Iterable[AffineForm] | None = None) -> "HyperSeries":
        return HyperSeries(
            tuple(self.num if num is None else num),
            tuple(self.den if den is None else den),
            self.argument,
            self.label,
        )

    # text form -----------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"pFq {self.p} {self.q}"]
        lines += [f"num: {p}" for p in self.num]
        lines += [f"den: {q}" for q in self.den]
        lines.append(f"z: {format_rational(self.argument)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "HyperSeries":
        num: list[AffineForm] = []
        den: list[AffineForm] = []
        z = None
        header = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("pFq"):
                header = tuple(int(t) for t in line.split()[1:3])
                continue
            key, _, val = line.partition(":")
            key = key.strip()
            if key == "num":
                num.append(AffineForm.parse(val))
            elif key == "den":
                den.append(AffineForm.parse(val))
            elif key == "z":
                z = Fraction(val.strip())
            else:
                raise ValueError(f"unrecognised line {raw!r}")
        if z is None:
            raise ValueError("missing argument line 'z:'")
        if header is not None and header != (len(num), len(den)):
            raise ValueError(f"header {header} does not match parameter counts")
        return cls(tuple(num), tuple(den), z)

    def __str__(self) -> str:
        nums = ", ".join(p.pretty() for p in self.num)
        dens = ", ".join(q.pretty() for q in self.den)
        return f"{self.p}F{self.q}({nums}; {dens}; {format_rational(self.argument)})"


def termination_index(num_values: Sequence[Fraction]) -> int:
    """Smallest ``-p`` over nonpositive-integer numerator values."""
    ts = [-int(p) for p in num_values if _is_nonpos_int(p)]
    if not ts:
        raise NotTerminating("no numerator parameter is a nonpositive integer")
    return min(ts)


def evaluate_terminating(s: HyperSeries, bindings: Mapping[str, RationalLike]) -> Fraction:
    """Exact value of a terminating series by term recursion.

    The sum runs for ``j = 0..T`` with ``T`` from :func:`termination_index`.
    A denominator value ``-m`` with ``m < T`` makes a later term undefined,
    which raises :class:`PoleBeforeTermination`.
    """
    nv, dv = s.bind(bindings)
    T = termination_index(nv)
    for q in dv:
        if _is_nonpos_int(q) and -q < T:
            raise PoleBeforeTermination(
                f"denominator parameter {format_rational(q)} vanishes before term {T}"
            )
    z = s.argument
    # integer parameters over a common denominator L: factor j is (a + L j)/L
    L = lcm(*(v.denominator for v in nv + dv), z.denominator)
    a_int = [int(p * L) for p in nv]
    b_int = [int(q * L) for q in dv]
    extra = len(dv) - len(nv)
    zn, zd = z.numerator, z.denominator
    if extra >= 0:
        zn *= L**extra
    else:
        zd *= L ** (-extra)
    # nested form 1 + r_0 (1 + r_1 (1 + ...)), evaluated inside out with one final reduction
    num, den = 1, 1
    for j in range(T - 1, -1, -1):
        Lj = L * j
        pj = zn * prod(a + Lj for a in a_int)
        qj = zd * (j + 1) * prod(b + Lj for b in b_int)
        num, den = qj * den + pj * num, qj * den
    return Fraction(num, den)


def evaluate_direct(s: HyperSeries, bindings: Mapping[str, RationalLike]) -> Fraction:
    """Oracle evaluation: every term rebuilt from Pochhammer products.

    Same termination and pole rules as :func:`evaluate_terminating`; used
    only to cross-check the recursion.
    """
    from .exact import pochhammer

    nv, dv = s.bind(bindings)
    T = termination_index(nv)
    total = Fraction(0)
    fact = 1
    for j in range(T + 1):
        if j:
            fact *= j
        num = Fraction(1)
        for p in nv:
            num *= pochhammer(p, j)
        den = Fraction(1)
        for q in dv:
            den *= pochhammer(q, j)
        if den == 0:
            raise PoleBeforeTermination("zero denominator Pochhammer reached")
        total += num / den * s.argument**j / fact
    return total


def evaluate_limit(
    s: HyperSeries,
    bindings: Mapping[str, RationalLike],
    var: str = "k",
) -> Fraction:
    """Value of the series in the limit ``var -> bindings[var]``.

    Each Pochhammer factor ``p + i`` is treated as ``c0 + c1*delta``.  A factor
    with ``c0 = 0`` contributes ``c1`` and one power of ``delta``; a term whose
    net power is positive vanishes in the limit, a negative net power raises
    :class:`PoleBeforeTermination`.  Termination comes only from parameters
    whose zero does not depend on ``var``.

    Agrees with :func:`evaluate_terminating` whenever no collision occurs.
    """
    if var not in _VARS:
        raise KeyError(var)
    b = _bindings(bindings)
    slope_attr = {"alpha": "c_alpha", "k": "c_k", "n": "c_n"}[var]
    nv = [(p.bind_map(b), getattr(p, slope_attr)) for p in s.num]
    dv = [(q.bind_map(b), getattr(q, slope_attr)) for q in s.den]
    hard = [-int(v) for v, c in nv if c == 0 and _is_nonpos_int(v)]
    if not hard:
        raise NotTerminating(f"no numerator parameter terminates independently of {var}")
    T = min(hard)
    z = s.argument
    total = Fraction(1)
    coef = Fraction(1)
    order = 0
    for j in range(T):
        for v, c in nv:
            x = v + j
            if x == 0:
                # c == 0 would be a hard zero, excluded by j < T
                coef *= c
                order += 1
            else:
                coef *= x
        for v, c in dv:
            x = v + j
            if x == 0:
                if c == 0:
                    raise PoleBeforeTermination(
                        f"denominator parameter {format_rational(v)} vanishes before term {T}"
                    )
                coef /= c
                order -= 1
            else:
                coef /= x
        coef = coef * z / (j + 1)
        if order < 0:
            raise PoleBeforeTermination(f"term {j + 1} diverges in the limit {var} -> {format_rational(b[var])}")
        if order == 0:
            total += coef
    return total


def balance_gap(s: HyperSeries) -> AffineForm:
    """``sum(den) - sum(num)``; the series is Saalschutzian when this is the constant 1."""
    acc = AffineForm()
    for q in s.den:
        acc = acc + q
    for p in s.num:
        acc = acc - p
    return acc


def alpha_count(s: HyperSeries) -> tuple[int, int]:
    return sum(1 for p in s.num if p.has_alpha), sum(1 for q in s.den if q.has_alpha)
