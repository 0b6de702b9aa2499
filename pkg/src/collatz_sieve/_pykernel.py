"""Pure-Python hot loops.

Fallback twin of the compiled ``_kernel`` extension: identical function
signatures and identical results, only slower.  All arithmetic is on
Python ints, so there is no overflow to worry about here.
"""

from array import array

from .errors import BudgetExceeded

# Peaks that do not fit the uint64 cache slot are kept in a side dict.
_PEAK_SENTINEL = 2**64 - 1


def walk_summary(n, max_steps):
    """Full walk from n: (applications until the first 1, highest term seen).

    The start value counts toward the high-water mark; the walk applies
    the map at least once, so walk_summary(1) == (3, 4).
    """
    m = n
    steps = 0
    high = n
    while True:
        m = 3 * m + 1 if m & 1 else m >> 1
        steps += 1
        if m > high:
            high = m
        if m == 1:
            return steps, high
        if steps >= max_steps:
            raise BudgetExceeded(n, max_steps)


def pso_pst(n, max_steps):
    """Steps until the walk from n first drops below n, and that term.

    Requires n >= 2 (a walk from 1 never drops below 1).
    """
    m = n
    steps = 0
    while True:
        m = 3 * m + 1 if m & 1 else m >> 1
        steps += 1
        if m < n:
            return steps, m
        if steps >= max_steps:
            raise BudgetExceeded(n, max_steps)


def stopping_local(n, max_steps):
    """Like pso_pst but also reports the highest term of the partial walk."""
    m = n
    steps = 0
    high = n
    while True:
        m = 3 * m + 1 if m & 1 else m >> 1
        steps += 1
        if m > high:
            high = m
        if m < n:
            return steps, m, high
        if steps >= max_steps:
            raise BudgetExceeded(n, max_steps)


def verify_range(lo, hi, max_steps):
    """Sequential-forward verification of lo..hi with a per-range cache.

    For each n the walk runs only until it drops below n; the total
    order and trajectory peak are then completed from the cache entry of
    the drop term (seeded by the 1-terminator).  Drop terms below lo are
    re-walked on demand.

    Returns (verified, max_pso, arg_pso, max_tso, arg_tso, max_peak,
    arg_peak, cache_hits, cache_entries).
    """
    count = hi - lo + 1
    tso_arr = array("I", bytes(4 * count))
    peak_arr = array("Q", bytes(8 * count))
    big_peaks = {}
    hits = 0
    max_pso = -1
    arg_pso = 0
    max_tso = -1
    arg_tso = 0
    max_peak = -1
    arg_peak = 0
    for n in range(lo, hi + 1):
        k, pst, local_peak = stopping_local(n, max_steps)
        if pst >= lo:
            idx = pst - lo
            t = tso_arr[idx]
            p = peak_arr[idx]
            if p == _PEAK_SENTINEL and pst in big_peaks:
                p = big_peaks[pst]
            hits += 1
        elif pst == 1:
            t, p = 0, 1
        else:
            t, p = walk_summary(pst, max_steps)
        tso_n = k + t
        peak_n = local_peak if local_peak >= p else p
        tso_arr[n - lo] = tso_n
        if peak_n >= _PEAK_SENTINEL:
            peak_arr[n - lo] = _PEAK_SENTINEL
            big_peaks[n] = peak_n
        else:
            peak_arr[n - lo] = peak_n
        if k > max_pso:
            max_pso = k
            arg_pso = n
        if tso_n > max_tso:
            max_tso = tso_n
            arg_tso = n
        if peak_n > max_peak:
            max_peak = peak_n
            arg_peak = n
    return (count, max_pso, arg_pso, max_tso, arg_tso, max_peak, arg_peak, hits, count)
