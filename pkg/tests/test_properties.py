import pytest

import bruteforce
from collatz_sieve import properties


@pytest.mark.parametrize("name", sorted(properties.ALL_CHECKS))
def test_all_checks_pass_at_small_limit(name):
    report = properties.ALL_CHECKS[name](1000)
    assert report.passed
    assert report.witness is None


def test_shared_pair_examples():
    # documented pairs (1,8), (3,20), (5,32) land on one walk after a step
    for n1 in (1, 3, 5):
        n2 = 6 * n1 + 2
        assert bruteforce.step(n2) == bruteforce.step(n1) == 3 * n1 + 1
    report = properties.check_shared_pair(1)
    assert report.passed


def test_consecutive_84_85_examples():
    assert bruteforce.nth_term(12, 3) == bruteforce.nth_term(13, 3) == 10
    assert bruteforce.tso(12) == bruteforce.tso(13) == 9
    assert bruteforce.tso(20) == bruteforce.tso(21) == 7
    report = properties.check_consecutive_84_85(50)
    assert report.passed
    assert report.vacuous_skipped == 1  # the x=0 pair stops early


def test_8x_8x2_examples():
    assert bruteforce.nth_term(24, 4) == bruteforce.nth_term(26, 4) == 10
    assert bruteforce.tso(24) == bruteforce.tso(26) == 10
    assert bruteforce.tso(40) == bruteforce.tso(42) == 8
    report = properties.check_8x_8x2(51)
    assert report.passed
    assert report.vacuous_skipped == 1  # x=1 stops early


def test_third_term_examples():
    assert bruteforce.tso(5) == bruteforce.tso(3) - 2
    assert bruteforce.tso(11) == bruteforce.tso(7) - 2
    assert bruteforce.tso(8) == bruteforce.tso(5) - 2
    report = properties.check_third_term(99)
    assert report.passed
    assert report.vacuous_skipped == 1


def test_quartet_recurrence_examples():
    report = properties.check_quartet_recurrences(10)
    assert report.passed
    assert bruteforce.tso(4) == 2
    assert bruteforce.tso(13) == 3 + bruteforce.tso(10)
    assert bruteforce.tso(6) == 1 + bruteforce.tso(3)


def test_no_repeat_examples():
    t7 = bruteforce.trajectory(7)
    assert len(set([7] + t7)) == 17
    t27 = bruteforce.trajectory(27)
    assert len(set([27] + t27)) == 112
    report = properties.check_no_repeat(100)
    assert report.passed


def test_report_consistency_guard():
    with pytest.raises(ValueError):
        properties.PropertyReport("x", 10, True, (1, 2), 0)
    with pytest.raises(ValueError):
        properties.PropertyReport("x", 10, False, None, 0)


def test_run_checks_selection_and_unknown_ids():
    reports = properties.run_checks(100, only=["no_repeat", "third_term"])
    assert [r.property_id for r in reports] == ["no_repeat", "third_term"]
    with pytest.raises(ValueError):
        properties.run_checks(100, only=["nope"])


def test_run_checks_order_is_stable():
    reports = properties.run_checks(50)
    assert [r.property_id for r in reports] == list(properties.ALL_CHECKS)


def test_top_tso():
    pairs = properties.top_tso(2, 200, 3)
    assert pairs[0] == (171, 124)
    assert [n for n, _ in pairs] == [171, 129, 127]
    assert all(t == bruteforce.tso(n) for n, t in pairs)
