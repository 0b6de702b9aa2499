# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Same surface as ``_pykernel``: walk_summary, pso_pst, stopping_local and
verify_range.  Walks run on uint64 machine words; any value that would
overflow 3*m+1 is handed back to the pure-Python twin, so results are
exact for arbitrary integers.
"""

from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport free, malloc

from . import _pykernel
from .errors import BudgetExceeded

cdef uint64_t _U64_MAX = <uint64_t> 0xFFFFFFFFFFFFFFFF
# largest m for which 3*m+1 still fits in 64 bits
cdef uint64_t _ODD_GUARD = (_U64_MAX - 1) // 3
cdef uint64_t _PEAK_SENTINEL = _U64_MAX

_PY_INT_U64_MAX = 2**64 - 1


cdef inline uint64_t _budget_u64(object max_steps):
    if max_steps >= _PY_INT_U64_MAX:
        return _U64_MAX
    return <uint64_t> max_steps


def walk_summary(n, max_steps):
    """Full walk from n: (applications until the first 1, highest term seen)."""
    if n > _PY_INT_U64_MAX:
        return _pykernel.walk_summary(n, max_steps)
    cdef uint64_t m = <uint64_t> n
    cdef uint64_t cap = _budget_u64(max_steps)
    cdef uint64_t steps = 0
    cdef uint64_t high = m
    while True:
        if m & 1:
            if m > _ODD_GUARD:
                return _pykernel.walk_summary(n, max_steps)
            m = 3 * m + 1
        else:
            m >>= 1
        steps += 1
        if m > high:
            high = m
        if m == 1:
            return steps, high
        if steps >= cap:
            raise BudgetExceeded(n, max_steps)


def pso_pst(n, max_steps):
    """Steps until the walk from n first drops below n, and that term."""
    if n > _PY_INT_U64_MAX:
        return _pykernel.pso_pst(n, max_steps)
    cdef uint64_t n0 = <uint64_t> n
    cdef uint64_t m = n0
    cdef uint64_t cap = _budget_u64(max_steps)
    cdef uint64_t steps = 0
    while True:
        if m & 1:
            if m > _ODD_GUARD:
                return _pykernel.pso_pst(n, max_steps)
            m = 3 * m + 1
        else:
            m >>= 1
        steps += 1
        if m < n0:
            return steps, m
        if steps >= cap:
            raise BudgetExceeded(n, max_steps)


def stopping_local(n, max_steps):
    """Like pso_pst but also reports the highest term of the partial walk."""
    if n > _PY_INT_U64_MAX:
        return _pykernel.stopping_local(n, max_steps)
    cdef uint64_t n0 = <uint64_t> n
    cdef uint64_t m = n0
    cdef uint64_t cap = _budget_u64(max_steps)
    cdef uint64_t steps = 0
    cdef uint64_t high = m
    while True:
        if m & 1:
            if m > _ODD_GUARD:
                return _pykernel.stopping_local(n, max_steps)
            m = 3 * m + 1
        else:
            m >>= 1
        steps += 1
        if m > high:
            high = m
        if m < n0:
            return steps, m, high
        if steps >= cap:
            raise BudgetExceeded(n, max_steps)


def verify_range(lo, hi, max_steps):
    """Sequential-forward verification of lo..hi; see the pure twin.

    Returns (verified, max_pso, arg_pso, max_tso, arg_tso, max_peak,
    arg_peak, cache_hits, cache_entries).
    """
    if hi > _ODD_GUARD:
        return _pykernel.verify_range(lo, hi, max_steps)
    cdef uint64_t c_lo = <uint64_t> lo
    cdef uint64_t c_hi = <uint64_t> hi
    cdef uint64_t cap = _budget_u64(max_steps)
    cdef uint64_t count = c_hi - c_lo + 1
    cdef uint32_t* tso_arr = <uint32_t*> malloc(count * sizeof(uint32_t))
    cdef uint64_t* peak_arr = <uint64_t*> malloc(count * sizeof(uint64_t))
    if tso_arr == NULL or peak_arr == NULL:
        free(tso_arr)
        free(peak_arr)
        raise MemoryError()
    big_peaks = {}
    cdef uint64_t hits = 0
    cdef uint64_t n, m, k, local_peak, pst, tso_n, peak_n, t, p
    cdef long long max_pso = -1, max_tso = -1
    cdef uint64_t arg_pso = 0, arg_tso = 0, arg_peak = 0
    cdef uint64_t max_peak = 0
    cdef bint have_peak = False
    cdef bint overflowed
    try:
        for n in range(c_lo, c_hi + 1):
            m = n
            k = 0
            local_peak = n
            overflowed = False
            while True:
                if m & 1:
                    if m > _ODD_GUARD:
                        overflowed = True
                        break
                    m = 3 * m + 1
                else:
                    m >>= 1
                k += 1
                if m > local_peak:
                    local_peak = m
                if m < n:
                    break
                if k >= cap:
                    raise BudgetExceeded(n, max_steps)
            if overflowed:
                py_k, py_pst, py_peak = _pykernel.stopping_local(n, max_steps)
                k = <uint64_t> py_k
                pst = <uint64_t> py_pst
                if py_peak >= _PY_INT_U64_MAX:
                    big_peaks[n] = py_peak
                    local_peak = _PEAK_SENTINEL
                else:
                    local_peak = <uint64_t> py_peak
            else:
                pst = m
            if pst >= c_lo:
                t = tso_arr[pst - c_lo]
                p = peak_arr[pst - c_lo]
                if p == _PEAK_SENTINEL and pst in big_peaks:
                    py_p = big_peaks[pst]
                else:
                    py_p = None
                hits += 1
            elif pst == 1:
                t = 0
                p = 1
                py_p = None
            else:
                py_t, py_tail_peak = walk_summary(pst, max_steps)
                t = <uint64_t> py_t
                if py_tail_peak >= _PY_INT_U64_MAX:
                    py_p = py_tail_peak
                    p = _PEAK_SENTINEL
                else:
                    p = <uint64_t> py_tail_peak
                    py_p = None
            tso_n = k + t
            if py_p is not None or local_peak == _PEAK_SENTINEL:
                py_peak_n = big_peaks.get(n, local_peak if local_peak != _PEAK_SENTINEL else 0)
                if py_p is not None and py_p > py_peak_n:
                    py_peak_n = py_p
                big_peaks[n] = py_peak_n
                peak_n = _PEAK_SENTINEL
            else:
                peak_n = local_peak if local_peak >= p else p
            tso_arr[n - c_lo] = <uint32_t> tso_n
            peak_arr[n - c_lo] = peak_n
            if <long long> k > max_pso:
                max_pso = <long long> k
                arg_pso = n
            if <long long> tso_n > max_tso:
                max_tso = <long long> tso_n
                arg_tso = n
            if peak_n != _PEAK_SENTINEL and (not have_peak or peak_n > max_peak):
                max_peak = peak_n
                arg_peak = n
                have_peak = True
        result_peak = max_peak
        result_arg_peak = arg_peak
        # fold any oversized peaks into the running maximum
        for n_key in sorted(big_peaks):
            if big_peaks[n_key] > result_peak:
                result_peak = big_peaks[n_key]
                result_arg_peak = n_key
        return (
            count,
            max_pso,
            arg_pso,
            max_tso,
            arg_tso,
            result_peak,
            result_arg_peak,
            hits,
            count,
        )
    finally:
        free(tso_arr)
        free(peak_arr)
