"""Independent brute-force oracle used to compute expected values.

Deliberately written as plain loops with no imports from the package
under test, so the two can disagree.
"""


def step(n):
    return 3 * n + 1 if n % 2 else n // 2


def trajectory(n):
    out = []
    while True:
        n = step(n)
        out.append(n)
        if n == 1:
            return out


def tso(n):
    if n == 1:
        return 0
    count = 0
    while n != 1:
        n = step(n)
        count += 1
    return count


def pso(n):
    assert n >= 2
    m = n
    count = 0
    while True:
        m = step(m)
        count += 1
        if m < n:
            return count, m


def peak(n):
    return max([n] + trajectory(n))


def nth_term(n, k):
    for _ in range(k):
        n = step(n)
    return n
