"""Numerical quadrature of two-qubit Bures spectral averages.

The normalised Bures density on the eigenvalue simplex is

    P(lam) = (128/pi) prod_{i<j} (|l_i - l_j|^2 / (l_i + l_j))^alpha / sqrt(prod l_i).

Integration runs over the ordered sector ``l1 <= l2 <= l3 <= l4`` (times
``4!``), which keeps the pairwise kinks ``|l_i - l_j|`` on the boundary.
Writing ``l_i = y_i^2`` on the unit sphere absorbs ``1/sqrt(prod l)`` into the
surface measure; the sphere sector is reached by central projection of the
ordered plane sector, and a Duffy map sends that to the unit cube, which is
refined adaptively with tensor Gauss-Legendre cells.

Under the ``"ordered"`` convention a monomial is applied to the sorted
spectrum (``l4`` largest); under ``"unordered"`` (the default) it is
symmetrised over all permutations, which is the average over the unordered
simplex.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ToleranceNotMet
from .exact import Poly, RationalLike, as_rational, pochhammer

__all__ = [
    "ORDERED",
    "CONVENTION",
    "UNORDERED",
    "FIRST_THREE",
    "PT_SQUARED_POLY",
    "S_POLY",
    "QuadSpec",
    "OracleResult",
    "density_value",
    "integrate",
    "normalization",
    "expect_monomial",
    "expect_polynomial",
    "expect_first_three",
    "expect_pt_squared",
    "closed_term",
    "assemble_n2",
]

ORDERED = "ordered"
UNORDERED = "unordered"
# fixed by the published monomial averages: <l4^8> = 0.0224561 only on the
# unordered simplex (the largest-eigenvalue reading gives 0.0897)
CONVENTION = UNORDERED

F = Fraction
# |rho^PT|^2 for the two-rebit Bures case as a polynomial in sorted eigenvalues;
# keys are exponents of (l1, l2, l3, l4)
PT_SQUARED_POLY: dict[tuple[int, int, int, int], Fraction] = {
    (0, 0, 0, 8): F(1, 576),
    (0, 0, 1, 7): F(1, 252),
    (0, 0, 2, 6): F(-103, 8400),
    (0, 1, 1, 6): F(-89, 6300),
    (0, 0, 3, 5): F(-197, 14700),
    (0, 1, 2, 5): F(-101, 2450),
    (1, 1, 1, 5): F(-2981, 44100),
    (0, 0, 4, 4): F(43091, 2116800),
    (0, 1, 3, 4): F(289, 9450),
    (0, 2, 2, 4): F(143, 3920),
    (1, 1, 2, 4): F(-5641, 44100),
    (0, 2, 3, 3): F(433, 22050),
    (1, 1, 3, 3): F(28181, 132300),
    (1, 2, 2, 3): F(1091, 2450),
    (2, 2, 2, 2): F(59441, 117600),
}
# the three monomials without closed-form expectations
FIRST_THREE = {e: PT_SQUARED_POLY[e] for e in [(0, 0, 0, 8), (0, 0, 1, 7), (0, 0, 2, 6)]}

S_POLY = Poly(
    [
        -11376862535850,
        -38483212259637,
        -49276400150880,
        -29574963265176,
        -6313467831760,
        2166731989792,
        1738045720352,
        464093464048,
        58511409152,
        2909089792,
    ]
)

_PAIRS = [(i, j) for i in range(4) for j in range(i + 1, 4)]


def density_value(lams: Sequence[float], alpha: RationalLike = F(1, 2)) -> float:
    """Bures density at a spectrum with all eigenvalues positive."""
    lam = [float(x) for x in lams]
    if len(lam) != 4:
        raise ValueError("need four eigenvalues")
    if min(lam) <= 0:
        raise DomainError("density is singular at a zero eigenvalue")
    if abs(sum(lam) - 1) > 1e-12:
        raise ValueError("eigenvalues must sum to 1")
    a = float(as_rational(alpha))
    val = 128 / math.pi / math.sqrt(math.prod(lam))
    for i, j in _PAIRS:
        val *= ((lam[i] - lam[j]) ** 2 / (lam[i] + lam[j])) ** a
    return val


@dataclass(frozen=True)
class QuadSpec:
    """Relative tolerance, Gauss order per axis and cell budget."""

    tol: float = 1e-7
    order: int = 8
    max_cells: int = 200_000
    batch: int = 64


@dataclass(frozen=True)
class OracleResult:
    integrand: str
    k: int
    value: float
    est_error: float
    cells: int
    convention: str

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


def _sector_points(x1, x2, x3):
    """Sorted spectra and quadrature weight (density included up to the repulsion) at cube points.

    ``y_i = z_i / |z|`` with ``z`` on the ordered plane sector ``sum z = 1``;
    then ``l_i = y_i^2`` and ``dl / sqrt(prod l) = 8 dsigma(y) = 8 dz / |z|^4``.
    """
    w2 = (1 - x1) * x2
    w3 = (1 - x1) * (1 - x2) * x3
    w4 = 1 - x1 - w2 - w3
    z1 = x1 / 4
    z2 = z1 + w2 / 3
    z3 = z2 + w3 / 2
    z4 = z3 + w4
    r2 = z1 * z1 + z2 * z2 + z3 * z3 + z4 * z4
    lams = (z1 * z1 / r2, z2 * z2 / r2, z3 * z3 / r2, z4 * z4 / r2)
    # Duffy Jacobian; 1/24 of the gap simplex cancels the 4! ordered sectors
    jac = 8 * 128 / np.pi * (1 - x1) ** 2 * (1 - x2) / (r2 * r2)
    return lams, jac


def _density_times_jac(lams, jac, alpha: float):
    base = jac
    for i, j in _PAIRS:
        d = lams[j] - lams[i]
        if alpha == 0.5:
            base = base * d / np.sqrt(lams[i] + lams[j])
        else:
            base = base * (d * d / (lams[i] + lams[j])) ** alpha
    return base


def integrate(
    func: Callable[[tuple], np.ndarray],
    alpha: RationalLike = F(1, 2),
    spec: QuadSpec = QuadSpec(),
    name: str = "custom",
    k: int = 0,
    convention: str = ORDERED,
) -> OracleResult:
    """Adaptive cubature of ``func(sorted spectrum) * density`` over the simplex.

    Cells are cubes in Duffy coordinates; each is compared with the sum of its
    eight children and the worst cells are split first.  The reported error is
    the sum of the per-cell differences.
    """
    a = float(as_rational(alpha))
    nodes, weights = _gauss(spec.order)
    # tensor nodes on [0,1]^3
    gx, gy, gz = np.meshgrid(nodes, nodes, nodes, indexing="ij")
    gw = np.einsum("i,j,k->ijk", weights, weights, weights).ravel()
    gx, gy, gz = gx.ravel(), gy.ravel(), gz.ravel()

    def rule(lo: np.ndarray, h: np.ndarray) -> np.ndarray:
        # lo: (m, 3) corners, h: (m,) edge lengths
        u = lo[:, 0:1] + h[:, None] * gx
        x2 = lo[:, 1:2] + h[:, None] * gy
        x3 = lo[:, 2:3] + h[:, None] * gz
        lams, jac = _sector_points(u, x2, x3)
        vals = _density_times_jac(lams, jac, a) * func(lams)
        return (vals @ gw) * h**3

    offsets = np.array(list(itertools.product((0, 1), repeat=3)), dtype=float)

    def refine(lo: np.ndarray, h: np.ndarray):
        kids_lo = (lo[:, None, :] + offsets[None, :, :] * (h[:, None, None] / 2)).reshape(-1, 3)
        kids_h = np.repeat(h / 2, 8)
        return kids_lo, kids_h, rule(kids_lo, kids_h)

    # start from an 8-cell split; heap entries are (-error, id)
    klo, kh, kv = refine(np.zeros((1, 3)), np.ones(1))
    cells: dict[int, tuple] = {}
    heap: list = []
    nid = 0
    total = 0.0
    err_total = 0.0
    # a cell's children are precomputed so its error is |parent - sum(children)|
    pending = [(klo[i], kh[i], kv[i]) for i in range(8)]
    while True:
        # evaluate grandchildren for pending cells in one batch
        if pending:
            plo = np.array([p[0] for p in pending])
            ph = np.array([p[1] for p in pending])
            glo, gh, gv = refine(plo, ph)
            gv = gv.reshape(-1, 8)
            for i, (clo, ch, cv) in enumerate(pending):
                fine = float(gv[i].sum())
                err = abs(cv - fine)
                cells[nid] = (clo, ch, fine, err, glo[8 * i : 8 * i + 8], gv[i])
                heapq.heappush(heap, (-err, nid))
                total += fine
                err_total += err
                nid += 1
            pending = []
        if err_total <= spec.tol * abs(total) or not heap:
            break
        if len(cells) >= spec.max_cells:
            raise ToleranceNotMet(
                f"{name}: error {err_total:.3g} above {spec.tol:g} relative after {len(cells)} cells"
            )
        for _ in range(min(spec.batch, len(heap))):
            _, cid = heapq.heappop(heap)
            clo, ch, fine, err, glo_c, gv_c = cells.pop(cid)
            total -= fine
            err_total -= err
            for j in range(8):
                pending.append((glo_c[j], ch / 2, float(gv_c[j])))
    # fixed-order re-summation for reproducibility
    ordered_ids = sorted(cells)
    value = math.fsum(cells[i][2] for i in ordered_ids)
    est = math.fsum(cells[i][3] for i in ordered_ids)
    return OracleResult(name, k, value, est, len(cells), convention)


def _monomial_func(exps: Sequence[int], k: int, convention: str):
    exps = tuple(int(e) for e in exps)
    if len(exps) != 4 or min(exps) < 0:
        raise ValueError("need four nonnegative exponents")
    if convention == ORDERED:
        perms = [exps]
    elif convention == UNORDERED:
        perms = sorted(set(itertools.permutations(exps)))
    else:
        raise ValueError(f"unknown convention {convention!r}")

    def f(lams):
        det = (lams[0] * lams[1] * lams[2] * lams[3]) ** k
        acc = 0.0
        for p in perms:
            term = np.ones_like(lams[0])
            for lv, e in zip(lams, p):
                if e:
                    term = term * lv**e
            acc = acc + term
        return det * acc / len(perms)

    return f


def normalization(alpha: RationalLike = F(1, 2), spec: QuadSpec = QuadSpec()) -> OracleResult:
    """Total mass of the density; 1 confirms the ``128/pi`` constant."""
    return integrate(lambda lams: np.ones_like(lams[0]), alpha, spec, "normalization", 0, CONVENTION)


def expect_monomial(
    exps: Sequence[int],
    k: int = 0,
    alpha: RationalLike = F(1, 2),
    spec: QuadSpec = QuadSpec(),
    convention: str | None = None,
) -> OracleResult:
    """``< l1^e1 l2^e2 l3^e3 l4^e4 (l1 l2 l3 l4)^k >``."""
    convention = convention or CONVENTION
    name = "monomial:" + ",".join(str(e) for e in exps)
    return integrate(_monomial_func(exps, k, convention), alpha, spec, name, k, convention)


def expect_polynomial(
    poly: Mapping[tuple[int, int, int, int], RationalLike],
    k: int = 0,
    alpha: RationalLike = F(1, 2),
    spec: QuadSpec = QuadSpec(),
    name: str = "polynomial",
    convention: str | None = None,
) -> OracleResult:
    """Expectation of ``sum c_e l^e`` times ``|rho|^k``."""
    convention = convention or CONVENTION
    terms = []
    for e, c in poly.items():
        perms = [tuple(e)] if convention == ORDERED else sorted(set(itertools.permutations(e)))
        cf = float(as_rational(c)) / len(perms)
        terms += [(p, cf) for p in perms]

    def f(lams):
        det = (lams[0] * lams[1] * lams[2] * lams[3]) ** k
        acc = 0.0
        for e, c in terms:
            t = c * np.ones_like(lams[0])
            for lv, p in zip(lams, e):
                if p:
                    t = t * lv**p
            acc = acc + t
        return det * acc

    return integrate(f, alpha, spec, name, k, convention)


def expect_first_three(k: int, spec: QuadSpec = QuadSpec()) -> OracleResult:
    """The three-monomial piece of ``<|rho^PT|^2 |rho|^k>`` (two-rebit Bures)."""
    return expect_polynomial(FIRST_THREE, k, F(1, 2), spec, "first-three")


def expect_pt_squared(k: int, spec: QuadSpec = QuadSpec()) -> OracleResult:
    """Full ``<|rho^PT|^2 |rho|^k>`` from the fifteen-monomial polynomial."""
    return expect_polynomial(PT_SQUARED_POLY, k, F(1, 2), spec, "pt-squared")


def closed_term(k: int) -> Fraction:
    """Exact remainder of ``<|rho^PT|^2 |rho|^k>`` beyond the three-monomial piece."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    k = int(k)
    num = F(1, 4 ** (4 * k + 13)) * pochhammer(F(-1, 4), k + 1) * pochhammer(F(1, 4), k + 1) * S_POLY(k)
    den = (
        3472875
        * (k + 2)
        * (k + 3)
        * (2 * k + 1)
        * (2 * k + 3)
        * (2 * k + 5)
        * pochhammer(F(3), k + 1)
        * pochhammer(F(11, 2), k + 1)
    )
    return -num / den


def assemble_n2(k: int, first_three):
    """``first_three + closed_term(k)``; exact when ``first_three`` is rational."""
    c = closed_term(k)
    if isinstance(first_three, (int, Fraction, str)):
        return as_rational(first_three) + c
    return float(first_three) + float(c)
