# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_shiftcore_py``: exact kernels over C integers.

Only the hot entry points are compiled (``cell_value``, ``range_sum_max``);
callers must pre-check the overflow guard (see ``kernels.fits_compiled``)
so every path product fits in int64 and every partial sum in int128.
Results are bit-identical to the pure versions.
"""

from libc.stdint cimport int64_t, int32_t

cdef extern from *:
    ctypedef long long int128_t "__int128"

cdef int MAXN = 64


def cell_value(desc, classes, int n, long long k):
    cdef int64_t num = 1
    cdef int dexp = 0
    cdef int i, bit
    _, state, edges, _, _ = desc
    cdef int st = state
    cdef int64_t f_num[2]
    cdef int f_dexp[2]
    cdef int f_nxt[2]
    # flatten edge table to C arrays once per call
    cdef int64_t enum_[4096]
    cdef int32_t edexp_[4096]
    cdef int32_t enxt_[4096]
    cdef int32_t cls_[64]
    cdef int n_slots = _flatten(edges, classes, n, enum_, edexp_, enxt_, cls_)
    if n_slots < 0:
        raise ValueError("descriptor too large for compiled kernel")
    cdef int base
    for i in range(n):
        bit = (k >> (n - 1 - i)) & 1
        base = (st * 32 + cls_[i]) * 2 + bit
        num *= enum_[base]
        dexp += edexp_[base]
        st = enxt_[base]
        if num == 0:
            return 0, 0
    return int(num), dexp


cdef int _flatten(edges, classes, int n,
                  int64_t *enum_, int32_t *edexp_, int32_t *enxt_,
                  int32_t *cls_):
    cdef int s, c, b
    cdef int n_states = len(edges)
    if n_states > 64 or n > MAXN:
        return -1
    for s in range(n_states):
        per_state = edges[s]
        if len(per_state) > 32:
            return -1
        for c in range(len(per_state)):
            for b in range(2):
                fnum, fdexp, nxt = per_state[c][b]
                enum_[(s * 32 + c) * 2 + b] = fnum
                edexp_[(s * 32 + c) * 2 + b] = fdexp
                enxt_[(s * 32 + c) * 2 + b] = nxt
    for s in range(n):
        cls_[s] = classes[s]
    return n_states


def range_sum_max(desc, classes, int n, long long a, long long b,
                  bint want_max=True):
    """In-order scan of cells [a, b): exact (sum, max) as dyadic pairs."""
    if a >= b:
        return 0, 0, 0, 0
    _, start, edges, _, max_dexp = desc

    cdef int64_t enum_[4096]
    cdef int32_t edexp_[4096]
    cdef int32_t enxt_[4096]
    cdef int32_t cls_[64]
    if _flatten(edges, classes, n, enum_, edexp_, enxt_, cls_) < 0:
        raise ValueError("descriptor too large for compiled kernel")

    cdef int32_t states[65]
    cdef int64_t nums[65]
    cdef int32_t dexps[65]
    states[0] = start
    nums[0] = 1
    dexps[0] = 0

    # fixed common denominator for the running sum
    cdef int sum_dexp = n * <int>max_dexp
    cdef int128_t s_acc = 0
    cdef int64_t m_num = 0
    cdef int m_dexp = 0

    cdef long long k = a
    cdef long long x
    cdef int i, bit, frm, base
    frm = 0
    while True:
        for i in range(frm, n):
            bit = (k >> (n - 1 - i)) & 1
            base = (states[i] * 32 + cls_[i]) * 2 + bit
            nums[i + 1] = nums[i] * enum_[base]
            dexps[i + 1] = dexps[i] + edexp_[base]
            states[i + 1] = enxt_[base]
        if nums[n] != 0:
            s_acc += (<int128_t> nums[n]) << (sum_dexp - dexps[n])
            if want_max and ((<int128_t> nums[n]) << m_dexp) > \
                            ((<int128_t> m_num) << dexps[n]):
                m_num = nums[n]
                m_dexp = dexps[n]
        k += 1
        if k >= b:
            break
        x = k ^ (k - 1)
        frm = n
        while x:
            x >>= 1
            frm -= 1

    # hand the 128-bit accumulator back as a Python int (hi << 64 | lo)
    cdef unsigned long long lo = <unsigned long long> s_acc
    cdef long long hi = <long long> (s_acc >> 64)
    s_num = (int(hi) << 64) | int(lo)
    return s_num, sum_dexp, int(m_num), m_dexp
