"""Exact numeric engine: step, trajectory, stopping orders and range verification.

All arithmetic is on unbounded Python ints.  The inner walks are served
by the compiled kernel when it is importable, otherwise by the pure
Python twin; both produce identical results.
"""

import os
from dataclasses import dataclass
from typing import NamedTuple

from . import _pykernel
from .errors import BudgetExceeded

try:
    from . import _kernel as _loops

    BACKEND = "compiled"
except ImportError:
    _loops = _pykernel
    BACKEND = "pure-python"

__all__ = [
    "BACKEND",
    "BudgetExceeded",
    "SequenceSummary",
    "StoppingData",
    "VerifyReport",
    "collatz_step",
    "default_step_budget",
    "peak",
    "pso",
    "summarize",
    "trajectory",
    "tso",
    "verify_range",
]

_DEFAULT_STEP_BUDGET = 10_000_000
_BUDGET_ENV = "COLLATZ_SIEVE_MAX_STEPS"


def default_step_budget():
    """Per-start step budget; COLLATZ_SIEVE_MAX_STEPS overrides the default."""
    raw = os.environ.get(_BUDGET_ENV)
    if raw is None:
        return _DEFAULT_STEP_BUDGET
    budget = int(raw)
    if budget < 1:
        raise ValueError(f"{_BUDGET_ENV} must be positive, got {raw!r}")
    return budget


def _require_nat(n, minimum=1):
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < minimum:
        raise ValueError(f"expected n >= {minimum}, got {n}")


def _budget(max_steps):
    if max_steps is None:
        return default_step_budget()
    _require_nat(max_steps)
    return max_steps


class StoppingData(NamedTuple):
    order: int
    pst: int


@dataclass(frozen=True)
class SequenceSummary:
    """Per-start numeric results; pso/pst are None for n=1 where undefined."""

    n: int
    tso: int
    pso: int | None
    pst: int | None
    peak: int


@dataclass(frozen=True)
class VerifyReport:
    lo: int
    hi: int
    verified: int
    max_pso: int
    arg_pso: int
    max_tso: int
    arg_tso: int
    max_peak: int
    arg_peak: int
    cache_hits: int
    cache_entries: int


def collatz_step(n):
    """One application of the map: 3n+1 for odd n, n/2 for even n."""
    _require_nat(n)
    return 3 * n + 1 if n & 1 else n >> 1


def trajectory(n, max_steps=None):
    """Terms from the first application down to the first 1; n itself excluded.

    Raises BudgetExceeded if 1 is not reached within the budget; the
    result is never silently truncated.
    """
    _require_nat(n)
    cap = _budget(max_steps)
    terms = []
    m = n
    while True:
        m = 3 * m + 1 if m & 1 else m >> 1
        terms.append(m)
        if m == 1:
            return terms
        if len(terms) >= cap:
            raise BudgetExceeded(n, cap)


def tso(n, max_steps=None):
    """Applications until the term first equals 1.

    Internally tso(1) == 0 so that tso(n) == pso(n) + tso(pst) holds
    everywhere; the display convention for n=1 lives in the reports
    layer.
    """
    _require_nat(n)
    if n == 1:
        return 0
    steps, _ = _loops.walk_summary(n, _budget(max_steps))
    return steps


def pso(n, max_steps=None):
    """Smallest k with the k-th term below n, plus that term's value.

    Not applicable for n=1: no term of a walk from 1 is ever below 1.
    """
    _require_nat(n)
    if n == 1:
        raise ValueError("stopping order is undefined for n=1")
    order, pst = _loops.pso_pst(n, _budget(max_steps))
    return StoppingData(order, pst)


def peak(n, max_steps=None):
    """Highest value over the trajectory including the start itself."""
    _require_nat(n)
    _, high = _loops.walk_summary(n, _budget(max_steps))
    return high


def summarize(n, max_steps=None):
    _require_nat(n)
    cap = _budget(max_steps)
    steps, high = _loops.walk_summary(n, cap)
    if n == 1:
        return SequenceSummary(n=1, tso=0, pso=None, pst=None, peak=high)
    order, pst = _loops.pso_pst(n, cap)
    return SequenceSummary(n=n, tso=steps, pso=order, pst=pst, peak=high)


def verify_range(lo, hi, max_steps=None, chunk_size=None):
    """Verify every n in lo..hi reaches a term below itself, in ascending order.

    Totals are derived through the cache recurrence tso(n) = pso(n) +
    tso(pst) seeded with tso(1) = 0.  ``chunk_size`` bounds cache memory:
    each chunk keeps its own cache and re-walks drop terms that fall
    before it.  Verified results are identical for any chunking; only the
    cache-hit statistics depend on it.
    """
    _require_nat(lo, minimum=2)
    _require_nat(hi, minimum=2)
    if lo > hi:
        raise ValueError(f"empty range: {lo}..{hi}")
    cap = _budget(max_steps)
    if chunk_size is not None:
        _require_nat(chunk_size)
    step = chunk_size or (hi - lo + 1)

    merged = None
    start = lo
    while start <= hi:
        end = min(start + step - 1, hi)
        part = _loops.verify_range(start, end, cap)
        merged = part if merged is None else _merge_verify(merged, part)
        start = end + 1
    (
        verified,
        max_pso,
        arg_pso,
        max_tso,
        arg_tso,
        max_peak,
        arg_peak,
        hits,
        entries,
    ) = merged
    return VerifyReport(
        lo=lo,
        hi=hi,
        verified=verified,
        max_pso=max_pso,
        arg_pso=arg_pso,
        max_tso=max_tso,
        arg_tso=arg_tso,
        max_peak=max_peak,
        arg_peak=arg_peak,
        cache_hits=hits,
        cache_entries=entries,
    )


def _merge_verify(a, b):
    # keep the smaller argument on ties: chunks arrive in ascending order
    def pick(val_a, arg_a, val_b, arg_b):
        if val_b > val_a:
            return val_b, arg_b
        return val_a, arg_a

    max_pso, arg_pso = pick(a[1], a[2], b[1], b[2])
    max_tso, arg_tso = pick(a[3], a[4], b[3], b[4])
    max_peak, arg_peak = pick(a[5], a[6], b[5], b[6])
    return (
        a[0] + b[0],
        max_pso,
        arg_pso,
        max_tso,
        arg_tso,
        max_peak,
        arg_peak,
        a[7] + b[7],
        a[8] + b[8],
    )
