"""Exact scalars, univariate polynomials, rational functions and affine parameter forms.

Every value here is immutable; rational scalars are plain :class:`fractions.Fraction`
instances, so the rest of the package can mix them freely with ``int``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

ExactRational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "ExactRational",
    "as_rational",
    "format_rational",
    "pochhammer",
    "pochhammer_affine",
    "AffineForm",
    "ALPHA",
    "K",
    "N",
    "ONE",
    "Poly",
    "RatFunc",
]


def as_rational(x: RationalLike | float) -> Fraction:
    """Convert ``x`` to an exact rational.

    Strings may be ``"p/q"``, integers, or decimal/scientific literals such as
    ``"1e-20"``; floats are rejected because they are not exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if not s:
            raise ValueError("empty rational literal")
        return Fraction(s)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string such as '1/2' or '1e-20'")
    # gmpy2.mpq, numbers.Rational and friends
    try:
        return Fraction(int(x.numerator), int(x.denominator))  # type: ignore[union-attr]
    except AttributeError:
        raise TypeError(f"cannot interpret {x!r} as a rational") from None


def format_rational(q: RationalLike) -> str:
    """Serialise as ``"p/q"`` (or ``"p"`` when ``q == 1``), sign on the numerator."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def pochhammer(x: RationalLike, m: int) -> Fraction:
    """Rising factorial ``x (x+1) ... (x+m-1)``; equals 1 for ``m == 0``."""
    if m < 0:
        raise ValueError("pochhammer length must be nonnegative")
    x = as_rational(x)
    num, den = x.numerator, x.denominator
    # accumulate numerator over the common denominator to avoid m gcd reductions
    p = 1
    for i in range(m):
        p *= num + i * den
    return Fraction(p, den**m)


# ---------------------------------------------------------------------------
# affine forms c0 + c_alpha*alpha + c_k*k + c_n*n
# ---------------------------------------------------------------------------

_AFFINE_TERM = re.compile(r"([+-]?)\s*([0-9/]*)\s*\*?\s*([akn]?)")


@dataclass(frozen=True)
class AffineForm:
    """Rational affine expression ``c0 + c_alpha*alpha + c_k*k + c_n*n``."""

    c0: Fraction = Fraction(0)
    c_alpha: Fraction = Fraction(0)
    c_k: Fraction = Fraction(0)
    c_n: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("c0", "c_alpha", "c_k", "c_n"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other: object) -> "AffineForm | None":
        if isinstance(other, AffineForm):
            return other
        if isinstance(other, (int, Fraction, str)) and not isinstance(other, bool):
            return AffineForm(as_rational(other))
        return None

    def __add__(self, other: object) -> "AffineForm":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AffineForm(self.c0 + o.c0, self.c_alpha + o.c_alpha, self.c_k + o.c_k, self.c_n + o.c_n)

    __radd__ = __add__

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.c0, -self.c_alpha, -self.c_k, -self.c_n)

    def __sub__(self, other: object) -> "AffineForm":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "AffineForm":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, c: object) -> "AffineForm":
        if isinstance(c, AffineForm) or isinstance(c, bool) or not isinstance(c, (int, Fraction)):
            return NotImplemented
        return AffineForm(self.c0 * c, self.c_alpha * c, self.c_k * c, self.c_n * c)

    __rmul__ = __mul__

    def __truediv__(self, c: object) -> "AffineForm":
        if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(c))

    # evaluation ---------------------------------------------------------
    def bind(self, alpha: RationalLike = 0, k: RationalLike = 0, n: RationalLike = 0) -> Fraction:
        return (
            self.c0
            + self.c_alpha * as_rational(alpha)
            + self.c_k * as_rational(k)
            + self.c_n * as_rational(n)
        )

    def bind_map(self, bindings: Mapping[str, RationalLike]) -> Fraction:
        return self.bind(bindings.get("alpha", 0), bindings.get("k", 0), bindings.get("n", 0))

    @property
    def has_alpha(self) -> bool:
        return self.c_alpha != 0

    @property
    def is_constant(self) -> bool:
        return self.c_alpha == 0 and self.c_k == 0 and self.c_n == 0

    # text form ----------------------------------------------------------
    def __str__(self) -> str:
        return (
            f"{format_rational(self.c0)} + {format_rational(self.c_alpha)}*a"
            f" + {format_rational(self.c_k)}*k + {format_rational(self.c_n)}*n"
        )

    def pretty(self) -> str:
        parts = []
        for coef, sym in ((self.c_alpha, "a"), (self.c_k, "k"), (self.c_n, "n"), (self.c0, "")):
            if coef == 0:
                continue
            mag = abs(coef)
            body = format_rational(mag) if (sym == "" or mag != 1) else ""
            if sym and body:
                body += "*"
            parts.append(("-" if coef < 0 else "+", body + sym))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str) -> "AffineForm":
        """Inverse of :meth:`__str__`; also accepts the compact :meth:`pretty` form."""
        s = text.replace(" ", "").replace("+-", "-")
        if not s:
            raise ValueError("empty affine form")
        coeffs = {"": Fraction(0), "a": Fraction(0), "k": Fraction(0), "n": Fraction(0)}
        pos = 0
        while pos < len(s):
            m = _AFFINE_TERM.match(s, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse affine form {text!r}")
            sign, num, sym = m.groups()
            if not num and not sym:
                raise ValueError(f"cannot parse affine form {text!r}")
            value = Fraction(num) if num else Fraction(1)
            coeffs[sym] += -value if sign == "-" else value
            pos = m.end()
        return cls(coeffs[""], coeffs["a"], coeffs["k"], coeffs["n"])


ONE = AffineForm(1)
ALPHA = AffineForm(c_alpha=Fraction(1))
K = AffineForm(c_k=Fraction(1))
N = AffineForm(c_n=Fraction(1))


def pochhammer_affine(p: AffineForm, m: int, bindings: Mapping[str, RationalLike]) -> Fraction:
    return pochhammer(p.bind_map(bindings), m)


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = [as_rational(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Polynomial with rational coefficients, stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        self.coeffs: tuple[Fraction, ...] = _trim(coeffs)

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    @classmethod
    def from_linear_factors(cls, factors: Iterable[tuple[RationalLike, RationalLike]], lead: RationalLike = 1) -> "Poly":
        """Product of ``(a*x + b)`` over ``(a, b)`` pairs, times ``lead``."""
        p = cls([lead])
        for a, b in factors:
            p = p * cls([b, a])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Poly | RationalLike") -> "Poly":
        o = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly | RationalLike") -> "Poly":
        o = other if isinstance(other, Poly) else Poly([other])
        return self + (-o)

    def __rsub__(self, other: RationalLike) -> "Poly":
        return Poly([other]) - self

    def __mul__(self, other: "Poly | RationalLike") -> "Poly":
        if not isinstance(other, Poly):
            c = as_rational(other)
            return Poly(x * c for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out = Poly([1])
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead
        dq = other.degree
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + dq] / lead
            q[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(q), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive(self) -> tuple[Fraction, "Poly"]:
        """Split into ``content * primitive`` with integer primitive part.

        The primitive part has coprime integer coefficients and a positive
        leading coefficient.
        """
        if self.is_zero():
            return Fraction(0), self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        content = Fraction(g, den)
        return content, Poly(Fraction(i // g) for i in ints)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
            # content normalisation keeps intermediate sizes in check
            if not b.is_zero():
                b = b.primitive()[1]
        return a.monic()

    def shift(self, delta: RationalLike) -> "Poly":
        """Return ``p(x + delta)``."""
        delta = as_rational(delta)
        out = Poly()
        step = Poly([delta, 1])
        for c in reversed(self.coeffs):
            out = out * step + Poly([c])
        return out

    def compose(self, other: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * other + Poly([c])
        return out

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def integer_coefficients(self) -> list[int]:
        """Coefficients as integers; raises if any coefficient is not integral."""
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
            out.append(c.numerator)
        return out

    def format(self, var: str = "k") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = format_rational(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format('x')})"


class RatFunc:
    """Reduced quotient of two rational polynomials.

    Normal form: ``gcd(num, den) == 1``, both with integer coefficients,
    the denominator primitive with positive leading coefficient.  Equality is
    therefore structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | RationalLike, den: Poly | RationalLike = 1, *, reduce_: bool = True):
        num = num if isinstance(num, Poly) else Poly([num])
        den = den if isinstance(den, Poly) else Poly([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce_:
            if num.is_zero():
                num, den = Poly(), Poly([1])
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                cden, den = den.primitive()
                num = num * (1 / cden)
        self.num: Poly = num
        self.den: Poly = den

    @classmethod
    def from_factored(
        cls,
        num: Sequence[tuple[RationalLike, RationalLike]] | Poly,
        den: Sequence[tuple[RationalLike, RationalLike]] | Poly,
        scale: RationalLike = 1,
    ) -> "RatFunc":
        n = num if isinstance(num, Poly) else Poly.from_linear_factors(num)
        d = den if isinstance(den, Poly) else Poly.from_linear_factors(den)
        return cls(n * as_rational(scale), d)

    def __call__(self, x: RationalLike) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {format_rational(x)}")
        return self.num(x) / d

    def is_pole(self, x: RationalLike) -> bool:
        return self.den(x) == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RatFunc(Poly([other]))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @staticmethod
    def _lift(other: object) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        return RatFunc(Poly([as_rational(other)]))  # type: ignore[arg-type]

    def __add__(self, other: object) -> "RatFunc":
        o = self._lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce_=False)

    def __sub__(self, other: object) -> "RatFunc":
        return self + (-self._lift(other))

    def __rsub__(self, other: object) -> "RatFunc":
        return self._lift(other) - self

    def __mul__(self, other: object) -> "RatFunc":
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatFunc":
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "RatFunc":
        return self._lift(other) / self

    def shift(self, delta: RationalLike) -> "RatFunc":
        return RatFunc(self.num.shift(delta), self.den.shift(delta))

    @property
    def degrees(self) -> tuple[int, int]:
        return max(self.num.degree, 0), self.den.degree

    def integer_form(self) -> tuple[Poly, Poly]:
        """Numerator and denominator scaled to coprime integer coefficients."""
        cn, pn = self.num.primitive()
        # num/den = cn*pn/den, den primitive: fold cn's denominator into den
        scale_n = Fraction(cn.numerator)
        scale_d = Fraction(cn.denominator)
        return pn * scale_n, self.den * scale_d

    def format(self, var: str = "k") -> str:
        n, d = self.integer_form()
        if d.degree == 0 and d.lead == 1:
            return f"({n.format(var)})"
        return f"({n.format(var)})/({d.format(var)})"

    def __repr__(self) -> str:
        return f"RatFunc({self.format('x')})"
