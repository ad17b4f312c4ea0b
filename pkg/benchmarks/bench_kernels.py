"""Compare the compiled and pure-Python fixed-point kernels.

Builds real inputs (hybrid 10F9 moments at k = 1e-20 and their Legendre
transform) and times both implementations on identical integers.

    python benchmarks/bench_kernels.py --N 400 --repeat 3
"""

from __future__ import annotations

import argparse
import json
import time
from fractions import Fraction

from detmoments import kernels
from detmoments.inversion import working_bits
from detmoments.moments import Mode, Source, SUPPORTS, _integer_params, affine_map, source_series


def _timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _series_jobs(N, bits):
    alpha = Fraction(1)
    mode = Mode.k_zero()
    series = source_series(Source.HYBRID_10F9, alpha)
    jobs = []
    for n in range(0, N + 1, max(1, N // 40)):
        jobs.append(_integer_params(series, {"alpha": alpha, "n": n, "k": mode.k_for(n)}) + (n,))
    return jobs, 1 << bits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    compiled = kernels.compiled_kernels()
    py = kernels.python_kernels
    bits = working_bits(args.N)
    jobs, t0 = _series_jobs(args.N, bits)

    def run_sums(mod):
        return [mod.hyp_fixed_sum(num, den, L, zn, zd, T, t0) for num, den, L, zn, zd, T in jobs]

    sums_py_t, sums_py = _timed(lambda: run_sums(py), args.repeat)
    support = SUPPORTS[Mode.k_zero().variable]
    _, shift = affine_map(support)
    # moments of a smooth test density, scaled to the working precision
    nus = [(t0 * Fraction(1, r + 1)).__floor__() for r in range(args.N + 1)]
    leg_py_t, leg_py = _timed(lambda: py.legendre_moments(nus, shift.numerator, shift.denominator), args.repeat)
    report = {
        "N": args.N,
        "bits": bits,
        "series_calls": len(jobs),
        "python": {"hyp_fixed_sum_s": round(sums_py_t, 4), "legendre_moments_s": round(leg_py_t, 4)},
    }
    if compiled is not None:
        sums_c_t, sums_c = _timed(lambda: run_sums(compiled), args.repeat)
        leg_c_t, leg_c = _timed(lambda: compiled.legendre_moments(nus, shift.numerator, shift.denominator), args.repeat)
        report["compiled"] = {"hyp_fixed_sum_s": round(sums_c_t, 4), "legendre_moments_s": round(leg_c_t, 4)}
        report["speedup"] = {
            "hyp_fixed_sum": round(sums_py_t / sums_c_t, 2),
            "legendre_moments": round(leg_py_t / leg_c_t, 2),
        }
        report["bit_identical"] = sums_c == sums_py and leg_c == leg_py
    else:
        report["compiled"] = None
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()
