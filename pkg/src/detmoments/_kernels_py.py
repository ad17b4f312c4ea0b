"""Pure-Python reference for the fixed-point kernels.

Every quantity is a Python ``int`` read as ``value / 2**S``.  Divisions floor
(Python ``//``) so the compiled kernels can match bit for bit.
"""

from __future__ import annotations

from math import prod

IMPLEMENTATION = "python"


def hyp_fixed_sum(num: list[int], den: list[int], L: int, zn: int, zd: int, T: int, t0: int) -> int:
    """Fixed-point partial sum of ``sum_j prod(a)_j/prod(b)_j z^j/j!`` times ``t0``.

    ``num``/``den`` are the parameters times the common denominator ``L``
    (so the Pochhammer factor at step ``j`` is ``(a + L*j)/L``), and the
    surplus powers of ``L`` are already folded into ``zn``/``zd``.  Stops early
    when a numerator factor vanishes; a vanishing denominator factor raises
    ``ZeroDivisionError``.
    """
    t = t0
    s = t0
    for j in range(T):
        Lj = L * j
        P = zn * prod(a + Lj for a in num)
        if P == 0:
            break
        Q = zd * (j + 1) * prod(b + Lj for b in den)
        if Q == 0:
            raise ZeroDivisionError(f"denominator factor vanishes at step {j}")
        t = t * P // Q
        s += t
    return s


def legendre_moments(nus: list[int], p: int, q: int) -> list[int]:
    """Fixed-point Legendre moments ``L_j = E[P_j(t)]`` for ``j = 0..N``.

    ``nus[r]`` is ``E[s^r]`` in fixed point, with ``t = s + p/q``.  Uses the
    shifted-moment recurrence
    ``M_{j+1}[r] = ((2j+1)(t0 M_j[r] + M_j[r+1]) - j M_{j-1}[r]) / (j+1)``.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    N = len(nus) - 1
    M = list(nus)
    M_prev: list[int] = []
    Ls = [M[0]]
    for j in range(N):
        if j == 0:
            new = [(p * x + q * y) // q for x, y in zip(M[:-1], M[1:])]
        else:
            c = 2 * j + 1
            qj = q * j
            d = q * (j + 1)
            new = [(c * (p * x + q * y) - qj * z) // d for x, y, z in zip(M[:-1], M[1:], M_prev)]
        M_prev, M = M, new
        Ls.append(M[0])
    return Ls
