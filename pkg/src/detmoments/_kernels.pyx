# cython: language_level=3, boundscheck=False, wraparound=False
"""GMP-backed fixed-point kernels; same results as ``_kernels_py`` bit for bit.

Python ints cross the boundary as little-endian magnitude bytes plus a sign,
so no GMP state is shared with other extension modules.
"""

from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython-gmp"


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_swap(mpz_ptr, mpz_ptr)
    void mpz_neg(mpz_ptr, mpz_srcptr)
    void mpz_add(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mul_ui(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_addmul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_submul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_fdiv_q(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_sgn(mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void *)
    void *mpz_export(void *, size_t *, int, size_t, int, size_t, mpz_srcptr)


cdef void _to_mpz(mpz_ptr z, object v):
    cdef bint neg = v < 0
    cdef object mag = -v if neg else v
    cdef bytes buf = mag.to_bytes((mag.bit_length() + 7) // 8, "little")
    cdef const unsigned char *raw = buf
    mpz_import(z, len(buf), -1, 1, 0, 0, raw)
    if neg:
        mpz_neg(z, z)


cdef object _from_mpz(mpz_srcptr z):
    cdef int sgn = mpz_sgn(z)
    if sgn == 0:
        return 0
    cdef size_t nbytes = (mpz_sizeinbase(z, 2) + 7) // 8
    cdef unsigned char *buf = <unsigned char *> malloc(nbytes)
    cdef size_t count = 0
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_export(buf, &count, -1, 1, 0, 0, z)
        v = int.from_bytes(buf[:count], "little")
    finally:
        free(buf)
    return -v if sgn < 0 else v


cdef class _MpzArray:
    cdef mpz_t *data
    cdef Py_ssize_t n

    def __cinit__(self, Py_ssize_t n):
        cdef Py_ssize_t i
        self.n = 0
        self.data = <mpz_t *> malloc(max(n, 1) * sizeof(mpz_t))
        if self.data == NULL:
            raise MemoryError()
        for i in range(n):
            mpz_init(self.data[i])
        self.n = n

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.data != NULL:
            for i in range(self.n):
                mpz_clear(self.data[i])
            free(self.data)


def hyp_fixed_sum(list num, list den, object L, object zn, object zd, Py_ssize_t T, object t0):
    """See ``_kernels_py.hyp_fixed_sum``."""
    cdef Py_ssize_t p = len(num), q = len(den), i, j
    cdef _MpzArray a = _MpzArray(p)
    cdef _MpzArray b = _MpzArray(q)
    cdef mpz_t zL, zzn, zzd, t, s, P, Q
    mpz_init(zL); mpz_init(zzn); mpz_init(zzd); mpz_init(t); mpz_init(s); mpz_init(P); mpz_init(Q)
    try:
        for i in range(p):
            _to_mpz(a.data[i], num[i])
        for i in range(q):
            _to_mpz(b.data[i], den[i])
        _to_mpz(zL, L)
        _to_mpz(zzn, zn)
        _to_mpz(zzd, zd)
        _to_mpz(t, t0)
        mpz_set(s, t)
        for j in range(T):
            # a_i + L*j, advanced in place after use
            mpz_set(P, zzn)
            for i in range(p):
                mpz_mul(P, P, a.data[i])
            if mpz_sgn(P) == 0:
                break
            mpz_mul_ui(Q, zzd, <unsigned long> (j + 1))
            for i in range(q):
                mpz_mul(Q, Q, b.data[i])
            if mpz_sgn(Q) == 0:
                raise ZeroDivisionError(f"denominator factor vanishes at step {j}")
            mpz_mul(t, t, P)
            mpz_fdiv_q(t, t, Q)
            mpz_add(s, s, t)
            for i in range(p):
                mpz_add(a.data[i], a.data[i], zL)
            for i in range(q):
                mpz_add(b.data[i], b.data[i], zL)
        return _from_mpz(s)
    finally:
        mpz_clear(zL); mpz_clear(zzn); mpz_clear(zzd); mpz_clear(t); mpz_clear(s); mpz_clear(P); mpz_clear(Q)


def legendre_moments(list nus, object p, object q):
    """See ``_kernels_py.legendre_moments``."""
    if q <= 0:
        raise ValueError("q must be positive")
    cdef Py_ssize_t N = len(nus) - 1, r, j, width
    cdef _MpzArray M = _MpzArray(N + 1)
    cdef _MpzArray Mp = _MpzArray(N + 1)
    cdef mpz_t zp, zq, c, qj, d, tmp
    cdef mpz_t *cur
    cdef mpz_t *prev
    cdef mpz_t *swap
    mpz_init(zp); mpz_init(zq); mpz_init(c); mpz_init(qj); mpz_init(d); mpz_init(tmp)
    out = [nus[0]]
    try:
        for r in range(N + 1):
            _to_mpz(M.data[r], nus[r])
        _to_mpz(zp, p)
        _to_mpz(zq, q)
        cur = M.data
        prev = Mp.data
        for j in range(N):
            width = N - j  # entries of the next row
            _to_mpz(c, 2 * j + 1)
            _to_mpz(qj, q * j)
            _to_mpz(d, q * (j + 1))
            for r in range(width):
                mpz_mul(tmp, zp, cur[r])
                mpz_addmul(tmp, zq, cur[r + 1])
                if j == 0:
                    mpz_fdiv_q(prev[r], tmp, zq)
                else:
                    mpz_mul(tmp, tmp, c)
                    mpz_submul(tmp, qj, prev[r])
                    mpz_fdiv_q(prev[r], tmp, d)
            # prev now holds row j+1; cur becomes row j for the next pass
            swap = cur
            cur = prev
            prev = swap
            out.append(_from_mpz(cur[0]))
        return out
    finally:
        mpz_clear(zp); mpz_clear(zq); mpz_clear(c); mpz_clear(qj); mpz_clear(d); mpz_clear(tmp)
