"""Executable audits of sequence identities over configurable ranges.

Each check scans ascending and reports the smallest counterexample, so a
failure pinpoints an engine bug rather than just flagging one.  The
identities themselves are theorem-like: on a correct engine every report
passes.
"""

from dataclasses import dataclass, field

from .core import collatz_step, trajectory, tso

__all__ = [
    "PropertyReport",
    "ALL_CHECKS",
    "check_8x_8x2",
    "check_consecutive_84_85",
    "check_no_repeat",
    "check_quartet_recurrences",
    "check_shared_pair",
    "check_third_term",
    "run_checks",
    "top_tso",
]


@dataclass(frozen=True)
class PropertyReport:
    property_id: str
    limit: int
    passed: bool
    witness: tuple | None
    vacuous_skipped: int
    detail: str = ""

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("a report passes exactly when it has no witness")


def _nth_term(n, k):
    for _ in range(k):
        n = collatz_step(n)
    return n


def check_shared_pair(limit):
    """Every odd n shares its walk with 6n+2: both map to 3n+1 in one step."""
    for n1 in range(1, limit + 1, 2):
        n2 = 6 * n1 + 2
        if collatz_step(n2) != collatz_step(n1):
            return PropertyReport(
                "shared_pair", limit, False,
                (n1, n2, collatz_step(n1), collatz_step(n2)), 0,
                detail="first steps differ",
            )
    return PropertyReport("shared_pair", limit, True, None, 0)


def check_consecutive_84_85(limit):
    """8x+4 and 8x+5 join at their third term 6x+4 and share the total order."""
    skipped = 0
    for x in range(0, limit + 1):
        if x == 0:
            skipped += 1  # n=4 terminates before the shared term exists
            continue
        a, b = 8 * x + 4, 8 * x + 5
        ta = _nth_term(a, 3)
        tb = _nth_term(b, 3)
        if not (ta == tb == 6 * x + 4 and tso(a) == tso(b)):
            return PropertyReport(
                "consecutive_84_85", limit, False,
                (x, a, b, ta, tb, tso(a), tso(b)), skipped,
            )
    return PropertyReport("consecutive_84_85", limit, True, None, skipped)


def check_8x_8x2(limit):
    """For odd x > 1, 8x and 8x+2 join at their fourth term 3x+1."""
    skipped = 0
    for x in range(1, limit + 1, 2):
        if x == 1:
            skipped += 1  # n=8 reaches 1 before the shared term exists
            continue
        a, b = 8 * x, 8 * x + 2
        ta = _nth_term(a, 4)
        tb = _nth_term(b, 4)
        if not (ta == tb == 3 * x + 1 and tso(a) == tso(b)):
            return PropertyReport(
                "8x_8x2", limit, False,
                (x, a, b, ta, tb, tso(a), tso(b)), skipped,
            )
    return PropertyReport("8x_8x2", limit, True, None, skipped)


def check_third_term(limit):
    """For odd n >= 3, (3n+1)/2 rides the same walk two applications behind."""
    skipped = 1  # n=1 stays inside the terminal cycle
    for n in range(3, limit + 1, 2):
        n2 = (3 * n + 1) // 2
        if tso(n2) != tso(n) - 2:
            return PropertyReport(
                "third_term", limit, False, (n, n2, tso(n), tso(n2)), skipped,
            )
    return PropertyReport("third_term", limit, True, None, skipped)


def check_quartet_recurrences(limit):
    """Total-order recurrences of the four residue families mod 4."""
    for p in range(1, limit + 1):
        checks = (
            (4 * p, 2 + tso(p)),
            (4 * p + 2, 1 + tso(2 * p + 1)),
            (4 * p + 1, 3 + tso(3 * p + 1)),
        )
        for n, expected in checks:
            actual = tso(n)
            if actual != expected:
                return PropertyReport(
                    "quartet_recurrences", limit, False, (p, n, expected, actual), 0,
                )
    return PropertyReport("quartet_recurrences", limit, True, None, 0)


def check_no_repeat(limit):
    """No value appears twice in a walk (the start included)."""
    skipped = 1  # n=1 is the terminal cycle itself and revisits its start
    for n in range(2, limit + 1):
        terms = trajectory(n)
        if len(set(terms)) != len(terms) or n in terms:
            return PropertyReport("no_repeat", limit, False, (n,), skipped)
    return PropertyReport("no_repeat", limit, True, None, skipped)


ALL_CHECKS = {
    "shared_pair": check_shared_pair,
    "consecutive_84_85": check_consecutive_84_85,
    "8x_8x2": check_8x_8x2,
    "third_term": check_third_term,
    "quartet_recurrences": check_quartet_recurrences,
    "no_repeat": check_no_repeat,
}


def run_checks(limit, only=None):
    """Run the named checks (all by default) and return their reports."""
    names = list(ALL_CHECKS) if only is None else list(only)
    unknown = [name for name in names if name not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown property ids: {', '.join(unknown)}")
    return [ALL_CHECKS[name](limit) for name in names]


def top_tso(lo, hi, k=10):
    """The k highest total orders in lo..hi, as (n, tso) descending.

    Informational: the unusually long walks carry no falsifiable claim,
    so this is a report rather than a pass/fail check.
    """
    best = sorted(((-tso(n), n) for n in range(lo, hi + 1)))[:k]
    return [(n, -neg) for neg, n in best]
