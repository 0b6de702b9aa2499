"""Worklist refinement of residue classes into uniform stopping-order leaves.

Each queued class is stepped symbolically until its term either proves
terminal (below the start form for every member), needs a parity split,
or hits a budget.  Splits enqueue the even-substitution child first and
the queue is FIFO, so expansion order and results are deterministic.
"""

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import core
from .affine import (
    AffineTerm,
    EventuallyTerminal,
    NotTerminal,
    Parity,
    ResidueClass,
    Terminal,
    check_terminal,
    parity,
    split_on_parity,
    step,
)
from .errors import BudgetMismatch, MismatchFound

__all__ = [
    "CoverageLedger",
    "CrossCheckReport",
    "Exhausted",
    "MemberCheck",
    "Mismatch",
    "SieveNode",
    "SieveResult",
    "SimilarityReport",
    "coverage",
    "leaf_cross_check",
    "sieve",
    "subtree_similarity",
]


@dataclass(frozen=True)
class Exhausted:
    reason: str  # "steps" or "modulus"


@dataclass(frozen=True)
class MemberCheck:
    """Numeric record for a member the symbolic claim does not cover."""

    x: int
    member: int
    pso: int | None
    note: str


@dataclass
class SieveNode:
    node_id: int
    residue_class: ResidueClass
    n_form: AffineTerm
    term: AffineTerm
    step_index: int
    status: object
    parent_id: int | None
    branch: str  # substitution history, "" for the root
    children: tuple[int, int] | None = None
    small_checks: tuple[MemberCheck, ...] = ()

    @property
    def is_leaf(self):
        return self.children is None


@dataclass
class SieveResult:
    root: ResidueClass
    max_steps: int
    max_modulus: int
    nodes: list[SieveNode]
    nodes_expanded: int
    max_modulus_reached: int

    def leaves(self):
        return [node for node in self.nodes if node.is_leaf]

    def terminal_leaves(self):
        return [n for n in self.leaves() if isinstance(n.status, Terminal)]

    def eventually_terminal_leaves(self):
        return [n for n in self.leaves() if isinstance(n.status, EventuallyTerminal)]

    def exhausted_leaves(self):
        return [n for n in self.leaves() if isinstance(n.status, Exhausted)]

    def leaf_counts_by_pso(self):
        """Number of terminal leaf classes per stopping order."""
        counts = {}
        for leaf in self.terminal_leaves():
            counts[leaf.status.pso] = counts.get(leaf.status.pso, 0) + 1
        return dict(sorted(counts.items()))

    def leaf_density_sum(self):
        """Exact share of the root held by the leaves; 1 iff they partition it."""
        return sum(
            (Fraction(self.root.modulus, leaf.residue_class.modulus) for leaf in self.leaves()),
            Fraction(0),
        )

    def terminal_leaf_map(self):
        return {
            (n.residue_class.modulus, n.residue_class.remainder): n.status.pso
            for n in self.terminal_leaves()
        }


def _numeric_exceptions(node, threshold):
    """Check members at x <= threshold that the symbolic claim leaves out."""
    checks = []
    for x in range(threshold + 1):
        member = node.n_form.evaluate(x)
        if member < 1:
            checks.append(MemberCheck(x, member, None, "not a natural number"))
        elif member == 1:
            checks.append(MemberCheck(x, member, None, "stopping order undefined"))
        else:
            order, _ = core.pso(member)
            checks.append(MemberCheck(x, member, order, "verified numerically"))
    return tuple(checks)


def sieve(root, max_steps, max_modulus):
    """Explore a residue class under dual budgets (steps, modulus).

    Budget exhaustion is a leaf status, not an error.  An eventually-
    terminal node whose exceptional members are all below 3 is recorded
    as terminal, with the numeric checks kept on the leaf; members 1 and
    2 are never part of a symbolic claim.
    """
    if max_steps < 1 or max_modulus < root.modulus:
        raise ValueError("budgets must allow at least the root itself")
    nodes = []
    queue = deque()

    def new_node(residue_class, n_form, term, step_index, parent_id, branch):
        node = SieveNode(
            node_id=len(nodes),
            residue_class=residue_class,
            n_form=n_form,
            term=term,
            step_index=step_index,
            status=NotTerminal(),
            parent_id=parent_id,
            branch=branch,
        )
        nodes.append(node)
        return node

    queue.append(new_node(root, root.as_term(), root.as_term(), 0, None, ""))
    expanded = 0
    max_mod_seen = root.modulus

    while queue:
        node = queue.popleft()
        expanded += 1
        while True:
            if node.step_index > 0:
                status = check_terminal(node.n_form, node.term, node.step_index)
                if isinstance(status, Terminal):
                    node.status = status
                    break
                if isinstance(status, EventuallyTerminal):
                    node.small_checks = _numeric_exceptions(node, status.threshold)
                    if all(c.member <= 2 for c in node.small_checks):
                        node.status = Terminal(status.pso)
                    else:
                        node.status = status
                    break
            if node.step_index >= max_steps:
                node.status = Exhausted("steps")
                break
            if parity(node.term) is Parity.UNDETERMINED:
                if 2 * node.residue_class.modulus > max_modulus:
                    node.status = Exhausted("modulus")
                    break
                even, odd = split_on_parity(node.residue_class, node.n_form, node.term)
                even_child = new_node(*even, node.step_index, node.node_id, node.branch + "e")
                odd_child = new_node(*odd, node.step_index, node.node_id, node.branch + "o")
                node.children = (even_child.node_id, odd_child.node_id)
                node.status = NotTerminal()
                queue.append(even_child)
                queue.append(odd_child)
                max_mod_seen = max(max_mod_seen, even_child.residue_class.modulus)
                break
            node.term = step(node.term)
            node.step_index += 1

    return SieveResult(
        root=root,
        max_steps=max_steps,
        max_modulus=max_modulus,
        nodes=nodes,
        nodes_expanded=expanded,
        max_modulus_reached=max_mod_seen,
    )


@dataclass(frozen=True)
class CoverageLedger:
    """Exact-rational accounting of how much of the base is classified."""

    per_pso: dict
    terminal_density: Fraction
    residual_density: Fraction
    base_density: Fraction


def coverage(result, base_density=Fraction(1)):
    """Density ledger for one exploration, relative to ``base_density``.

    Every terminal leaf of modulus M holds base * root_modulus / M of the
    base; whatever is not terminal (still open or budget-exhausted) is
    the residual.
    """
    base_density = Fraction(base_density)
    per_pso = {}
    total = Fraction(0)
    for leaf in result.terminal_leaves():
        share = base_density * Fraction(result.root.modulus, leaf.residue_class.modulus)
        per_pso[leaf.status.pso] = per_pso.get(leaf.status.pso, Fraction(0)) + share
        total += share
    return CoverageLedger(
        per_pso=dict(sorted(per_pso.items())),
        terminal_density=total,
        residual_density=base_density - total,
        base_density=base_density,
    )


@dataclass(frozen=True)
class Mismatch:
    modulus: int
    remainder: int
    x: int
    member: int
    expected_pso: int
    actual_pso: int | None


@dataclass
class CrossCheckReport:
    samples_per_leaf: int
    leaves_checked: int
    members_checked: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches


def leaf_cross_check(result, samples_per_leaf=100, strict=False):
    """Numeric audit of every terminal claim in an exploration.

    For each terminal leaf the first ``samples_per_leaf`` members with
    value >= 3 must show exactly the claimed stopping order; an
    eventually-terminal leaf is sampled past its threshold and its
    exceptional members are each walked individually.  With ``strict``
    the first disagreement raises MismatchFound.
    """
    mismatches = []
    leaves = 0
    members = 0

    def check_member(leaf, x, member, expected):
        nonlocal members
        members += 1
        order, _ = core.pso(member)
        if order != expected:
            mismatches.append(
                Mismatch(
                    leaf.residue_class.modulus,
                    leaf.residue_class.remainder,
                    x,
                    member,
                    expected,
                    order,
                )
            )

    def sample(leaf, expected, start_x):
        taken = 0
        x = start_x
        while taken < samples_per_leaf:
            member = leaf.residue_class.member(x)
            if member >= 3:
                check_member(leaf, x, member, expected)
                taken += 1
            x += 1

    for leaf in result.leaves():
        if isinstance(leaf.status, Terminal):
            leaves += 1
            sample(leaf, leaf.status.pso, 0)
        elif isinstance(leaf.status, EventuallyTerminal):
            leaves += 1
            sample(leaf, leaf.status.pso, leaf.status.threshold + 1)
            for check in leaf.small_checks:
                if check.member >= 2:
                    members += 1
                    # converging at all is the claim here; the order differs
                    core.pso(check.member)

    report = CrossCheckReport(
        samples_per_leaf=samples_per_leaf,
        leaves_checked=leaves,
        members_checked=members,
        mismatches=mismatches,
    )
    if strict and mismatches:
        raise MismatchFound(mismatches[0], report)
    return report


@dataclass
class SimilarityReport:
    similar: bool
    first_divergence: int | None
    levels_a: dict
    levels_b: dict


def _level_profile(result):
    """Per step level, the sorted relative densities of terminal leaves."""
    levels = {}
    for leaf in result.terminal_leaves() + result.eventually_terminal_leaves():
        share = Fraction(result.root.modulus, leaf.residue_class.modulus)
        levels.setdefault(leaf.status.pso, []).append(share)
    return {k: sorted(v) for k, v in sorted(levels.items())}


def subtree_similarity(a, b):
    """Do two equally budgeted explorations classify with the same shape?

    Compares, level by level, the multiset of (relative density, order)
    over terminal leaves; reports the first diverging level.
    """
    if (a.max_steps, a.max_modulus) != (b.max_steps, b.max_modulus):
        raise BudgetMismatch(
            f"budgets differ: ({a.max_steps}, {a.max_modulus}) vs ({b.max_steps}, {b.max_modulus})"
        )
    profile_a = _level_profile(a)
    profile_b = _level_profile(b)
    first = None
    for level in range(1, a.max_steps + 1):
        if profile_a.get(level, []) != profile_b.get(level, []):
            first = level
            break
    return SimilarityReport(
        similar=first is None,
        first_divergence=first,
        levels_a=profile_a,
        levels_b=profile_b,
    )
