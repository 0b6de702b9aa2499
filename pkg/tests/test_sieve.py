from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bruteforce
from collatz_sieve.affine import AffineTerm, EventuallyTerminal, ResidueClass, Terminal
from collatz_sieve.errors import BudgetMismatch, MismatchFound
from collatz_sieve.sieve import (
    CrossCheckReport,
    Exhausted,
    SieveNode,
    coverage,
    leaf_cross_check,
    sieve,
    subtree_similarity,
)

# The deep reference run: every leaf class whose members share one
# stopping order when the quartet remainder-3 class is refined through
# thirteen applications.
DEEP_LEAVES = {
    (16, 3): 6,
    (32, 11): 8,
    (32, 23): 8,
    (128, 7): 11,
    (128, 15): 11,
    (128, 59): 11,
    (256, 39): 13,
    (256, 79): 13,
    (256, 95): 13,
    (256, 123): 13,
    (256, 175): 13,
    (256, 199): 13,
    (256, 219): 13,
}


def covered_exactly(result, modulus, remainder, expected_pso):
    """The target class is exactly the union of terminal leaves with that order."""
    total = Fraction(0)
    for leaf in result.terminal_leaves():
        leaf_m = leaf.residue_class.modulus
        leaf_r = leaf.residue_class.remainder
        joint = min(leaf_m, modulus)
        if leaf_r % joint != remainder % joint:
            continue
        if leaf.status.pso != expected_pso:
            return False
        total += Fraction(modulus, leaf_m) if leaf_m >= modulus else Fraction(1)
    return total == 1


@pytest.fixture(scope="module")
def deep_run():
    return sieve(ResidueClass(4, 3), 13, 4096)


def test_deep_run_terminal_leaves_frozen(deep_run):
    assert deep_run.terminal_leaf_map() == DEEP_LEAVES


def test_deep_run_reproduces_published_claims(deep_run):
    assert covered_exactly(deep_run, 16, 3, 6)
    assert covered_exactly(deep_run, 32, 19, 6)  # inside the 16x+3 leaf
    assert covered_exactly(deep_run, 32, 11, 8)
    assert covered_exactly(deep_run, 32, 23, 8)
    # refinements of 32x+27: x congruent 1,5 / 3 / 6 mod 8
    assert covered_exactly(deep_run, 128, 59, 11)
    assert covered_exactly(deep_run, 256, 123, 13)
    assert covered_exactly(deep_run, 256, 219, 13)


def test_deep_run_partitions_root(deep_run):
    assert deep_run.leaf_density_sum() == 1
    # and the leaves are pairwise disjoint over an honest member scan
    owners = {}
    for leaf in deep_run.leaves():
        for n in range(3, 3000):
            if leaf.residue_class.contains(n):
                assert n not in owners, (n, owners.get(n), str(leaf.residue_class))
                owners[n] = leaf.node_id
    assert set(owners) == {n for n in range(3, 3000) if n % 4 == 3}


def test_deep_run_budget_statistics(deep_run):
    assert deep_run.max_modulus_reached == 256
    assert not deep_run.eventually_terminal_leaves()
    assert len(deep_run.exhausted_leaves()) == 13
    assert all(leaf.status.reason == "steps" for leaf in deep_run.exhausted_leaves())


def test_octet_stage_run():
    result = sieve(ResidueClass(4, 3), 8, 64)
    assert result.terminal_leaf_map() == {(16, 3): 6, (32, 11): 8, (32, 23): 8}
    assert covered_exactly(result, 32, 19, 6)


def test_modulus_budget_becomes_exhausted_leaves():
    result = sieve(ResidueClass(4, 3), 13, 16)
    assert result.terminal_leaf_map() == {(16, 3): 6}
    reasons = {leaf.status.reason for leaf in result.exhausted_leaves()}
    assert reasons == {"modulus"}
    assert result.leaf_density_sum() == 1


def test_quartet_roots():
    run0 = sieve(ResidueClass(4, 0), 8, 64)
    (leaf0,) = run0.leaves()
    assert leaf0.status == Terminal(1)
    assert [(c.member, c.pso) for c in leaf0.small_checks] == [(0, None)]

    run1 = sieve(ResidueClass(4, 1), 8, 64)
    (leaf1,) = run1.leaves()
    assert leaf1.status == Terminal(3)
    assert [(c.member, c.pso) for c in leaf1.small_checks] == [(1, None)]

    run2 = sieve(ResidueClass(4, 2), 8, 64)
    (leaf2,) = run2.leaves()
    assert leaf2.status == Terminal(1)
    assert leaf2.small_checks == ()


def test_rooted_at_deeper_class_gives_same_orders():
    result = sieve(ResidueClass(32, 27), 13, 2048)
    assert result.terminal_leaf_map() == {
        (128, 59): 11,
        (256, 123): 13,
        (256, 219): 13,
    }


def test_step_indices_strictly_increase(deep_run):
    for node in deep_run.nodes:
        if node.children:
            for child_id in node.children:
                assert deep_run.nodes[child_id].step_index >= node.step_index
        if node.parent_id is not None:
            parent = deep_run.nodes[node.parent_id]
            assert node.step_index >= parent.step_index
    for leaf in deep_run.terminal_leaves():
        assert leaf.status.pso == leaf.step_index


def test_symbolic_terms_track_numeric_walks(deep_run):
    # master equivalence: at every node, the term evaluated at q equals
    # the step_index-th application on the member at q
    for node in deep_run.nodes:
        for q in (0, 1, 2, 7, 30):
            member = node.n_form.evaluate(q)
            if member < 1:
                continue
            assert node.term.evaluate(q) == bruteforce.nth_term(member, node.step_index)


@given(
    st.sampled_from([1, 2, 4, 8, 16, 32]),
    st.integers(min_value=0, max_value=31),
    st.integers(min_value=4, max_value=12),
)
@settings(max_examples=40, deadline=None)
def test_random_roots_stay_sound(modulus, rem_seed, max_steps):
    root = ResidueClass(modulus, rem_seed % modulus)
    result = sieve(root, max_steps, 1 << 12)
    assert result.leaf_density_sum() == 1
    for node in result.nodes:
        for q in (0, 1, 5):
            member = node.n_form.evaluate(q)
            if member < 1:
                continue
            assert node.term.evaluate(q) == bruteforce.nth_term(member, node.step_index)
    report = leaf_cross_check(result, samples_per_leaf=5)
    assert report.ok


def test_monotonicity_in_budgets():
    base = sieve(ResidueClass(4, 3), 8, 64)
    for steps, modulus in [(10, 256), (13, 4096), (16, 1 << 14)]:
        bigger = sieve(ResidueClass(4, 3), steps, modulus)
        assert set(base.terminal_leaf_map().items()) <= set(
            bigger.terminal_leaf_map().items()
        )
        base = bigger


def test_determinism():
    a = sieve(ResidueClass(4, 3), 13, 4096)
    b = sieve(ResidueClass(4, 3), 13, 4096)
    assert [
        (n.node_id, n.residue_class, n.term, n.step_index, n.status, n.branch)
        for n in a.nodes
    ] == [
        (n.node_id, n.residue_class, n.term, n.step_index, n.status, n.branch)
        for n in b.nodes
    ]


def test_fifo_even_child_first(deep_run):
    for node in deep_run.nodes:
        if node.children:
            even_id, odd_id = node.children
            assert even_id < odd_id
            assert deep_run.nodes[even_id].branch.endswith("e")
            assert deep_run.nodes[odd_id].branch.endswith("o")


def test_coverage_quartet_and_octet_stages():
    quartet = [sieve(ResidueClass(4, c), 8, 64) for c in (0, 1, 2)]
    ledgers = [coverage(run, Fraction(1, 4)) for run in quartet]
    assert sum(led.terminal_density for led in ledgers) == Fraction(3, 4)

    octet = coverage(sieve(ResidueClass(4, 3), 8, 64), Fraction(1, 4))
    assert octet.per_pso == {6: Fraction(1, 16), 8: Fraction(1, 16)}
    assert octet.terminal_density == Fraction(1, 8)
    total = sum(led.terminal_density for led in ledgers) + octet.terminal_density
    assert total == Fraction(7, 8)


def test_coverage_relative_to_root():
    led = coverage(sieve(ResidueClass(4, 3), 8, 64))
    assert led.base_density == 1
    assert led.terminal_density == Fraction(1, 2)
    assert led.residual_density == Fraction(1, 2)
    assert led.per_pso == {6: Fraction(1, 4), 8: Fraction(1, 4)}


def test_coverage_empty_result_is_all_residual():
    untouched = sieve(ResidueClass(4, 3), 2, 4)
    led = coverage(untouched)
    assert led.terminal_density == 0
    assert led.residual_density == 1


def test_cross_check_samples_expected_members(deep_run):
    report = leaf_cross_check(deep_run, samples_per_leaf=5)
    assert report.ok
    assert report.leaves_checked == len(DEEP_LEAVES)
    assert report.members_checked == 5 * len(DEEP_LEAVES)
    # the documented spot values
    assert [bruteforce.pso(n)[0] for n in (3, 19, 35, 51, 67)] == [6] * 5
    assert [bruteforce.pso(n)[0] for n in (23, 55, 87, 119)] == [8] * 4
    assert bruteforce.pso(5)[0] == 3


def test_cross_check_catches_a_corrupted_leaf(deep_run):
    import copy

    broken = copy.deepcopy(deep_run)
    for node in broken.nodes:
        if node.is_leaf and isinstance(node.status, Terminal) and node.status.pso == 6:
            node.status = Terminal(7)
    report = leaf_cross_check(broken, samples_per_leaf=3)
    assert not report.ok
    first = report.mismatches[0]
    assert (first.modulus, first.remainder) == (16, 3)
    assert first.expected_pso == 7
    assert first.actual_pso == 6
    with pytest.raises(MismatchFound):
        leaf_cross_check(broken, samples_per_leaf=3, strict=True)


def test_cross_check_eventually_terminal_path():
    # fabricated: claim that 4x+1 stops at order 3 only past x=0
    node = SieveNode(
        node_id=0,
        residue_class=ResidueClass(4, 1),
        n_form=AffineTerm(4, 1),
        term=AffineTerm(3, 1),
        step_index=3,
        status=EventuallyTerminal(3, 0),
        parent_id=None,
        branch="",
    )
    from collatz_sieve.sieve import SieveResult

    result = SieveResult(
        root=ResidueClass(4, 1),
        max_steps=3,
        max_modulus=4,
        nodes=[node],
        nodes_expanded=1,
        max_modulus_reached=4,
    )
    report = leaf_cross_check(result, samples_per_leaf=4)
    assert report.ok
    assert report.members_checked == 4


def test_similarity_reflexive():
    a = sieve(ResidueClass(64, 7), 16, 1 << 14)
    assert subtree_similarity(a, a).similar


def test_similarity_families():
    budgets = (16, 1 << 14)
    family_one = [ResidueClass(64, r) for r in (7, 15, 59)]
    family_two = [ResidueClass(64, r) for r in (39, 47, 27, 31)]
    for family in (family_one, family_two):
        runs = [sieve(root, *budgets) for root in family]
        for other in runs[1:]:
            report = subtree_similarity(runs[0], other)
            assert report.similar, (str(other.root), report.first_divergence)
    # and across the families the shapes differ
    cross = subtree_similarity(
        sieve(family_one[0], *budgets), sieve(family_two[0], *budgets)
    )
    assert not cross.similar
    assert cross.first_divergence == 11


def test_similarity_divergence_and_budget_guard():
    report = subtree_similarity(
        sieve(ResidueClass(4, 0), 8, 64), sieve(ResidueClass(4, 3), 8, 64)
    )
    assert not report.similar
    assert report.first_divergence == 1
    with pytest.raises(BudgetMismatch):
        subtree_similarity(
            sieve(ResidueClass(4, 0), 8, 64), sieve(ResidueClass(4, 3), 9, 64)
        )


def test_all_naturals_root():
    result = sieve(ResidueClass(1, 0), 10, 64)
    leaf_map = result.terminal_leaf_map()
    assert leaf_map[(2, 0)] == 1  # every even number halves below itself
    assert leaf_map[(4, 1)] == 3
    assert result.leaf_density_sum() == 1


def test_sieve_rejects_hopeless_budgets():
    with pytest.raises(ValueError):
        sieve(ResidueClass(4, 3), 0, 64)
    with pytest.raises(ValueError):
        sieve(ResidueClass(4, 3), 8, 2)
