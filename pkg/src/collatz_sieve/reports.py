"""Machine-readable report documents: summary tables, histograms, coverage
ledgers and tree exports (JSON and Graphviz DOT).

Documents serialize to CSV (header row, comma-separated, LF) or JSON with
a stable field order, so identical inputs always produce identical bytes.
Percentages are printed as exact terminating decimals; every density here
has a power-of-two denominator, so nothing is ever rounded.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from ._version import __version__
from .affine import EventuallyTerminal, ResidueClass, Terminal
from .core import default_step_budget, pso, summarize, trajectory, tso
from .sieve import Exhausted, SieveResult, coverage

__all__ = [
    "ReportDocument",
    "REFERENCE_PSO_COUNTS",
    "coverage_report",
    "exact_decimal",
    "export_tree",
    "dumps_tree_document",
    "histogram_diff",
    "pso_histogram",
    "sequence_table",
    "table_summary",
    "tree_document",
]


def exact_decimal(value):
    """Exact decimal expansion of a rational with 2^a*5^b denominator."""
    q = Fraction(value)
    num, den = q.numerator, q.denominator
    twos = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    fives = 0
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{q} has no terminating decimal expansion")
    digits = max(twos, fives)
    scaled = num * 2 ** (digits - twos) * 5 ** (digits - fives)
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    whole, frac = text[: len(text) - digits], text[len(text) - digits :]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


@dataclass
class ReportDocument:
    title: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(row)
        return buffer.getvalue()

    def to_json(self):
        doc = {
            "title": self.title,
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"


def _base_metadata(**extra):
    meta = {"tool": "collatz-sieve", "version": __version__}
    meta.update(extra)
    return meta


# Display convention: the summary row for n=1 shows the cycle entry 4,2,1
# as three applications and no stopping order; internally tso(1) is 0 so
# the recurrence tso(n) = pso(n) + tso(pst) stays exact.
def _display_pair(n):
    if n == 1:
        return "NA", 3
    data = pso(n)
    return data.order, tso(n)


def table_summary(lo, hi):
    """Rows (n, pso, tso) for lo..hi under the display conventions."""
    if lo < 1 or lo > hi:
        raise ValueError(f"bad range {lo}..{hi}")
    rows = []
    for n in range(lo, hi + 1):
        order, total = _display_pair(n)
        rows.append((n, order, total))
    return ReportDocument(
        title="stopping-order summary",
        columns=["n", "pso", "tso"],
        rows=rows,
        metadata=_base_metadata(lo=lo, hi=hi),
    )


def sequence_table(lo, hi, max_steps=None):
    """Full-trajectory rows (n, parity type, trajectory, tso)."""
    if lo < 1 or lo > hi:
        raise ValueError(f"bad range {lo}..{hi}")
    rows = []
    for n in range(lo, hi + 1):
        terms = trajectory(n, max_steps=max_steps)
        rows.append(
            (
                n,
                "Odd" if n & 1 else "Even",
                ", ".join(str(t) for t in terms),
                len(terms) if n == 1 else tso(n),
            )
        )
    return ReportDocument(
        title="trajectory table",
        columns=["n", "type", "trajectory", "tso"],
        rows=rows,
        metadata=_base_metadata(lo=lo, hi=hi),
    )


def pso_histogram(residue_class, x_lo, x_hi, parity_filter="all"):
    """Tally of numeric stopping orders over members of a class.

    Walks every member M*x + R for x_lo <= x <= x_hi (optionally only
    even or only odd x) and counts how many reach each order; members
    below 2 are skipped and reported in the metadata.
    """
    if parity_filter not in ("all", "even", "odd"):
        raise ValueError(f"parity_filter must be all/even/odd, got {parity_filter!r}")
    if x_lo > x_hi:
        xs = []
    else:
        xs = range(x_lo, x_hi + 1)
    counts = {}
    total = 0
    skipped = 0
    for x in xs:
        if parity_filter == "even" and x & 1:
            continue
        if parity_filter == "odd" and not x & 1:
            continue
        member = residue_class.member(x)
        if member < 2:
            skipped += 1
            continue
        order, _ = pso(member)
        counts[order] = counts.get(order, 0) + 1
        total += 1
    rows = []
    serial = 0
    for order in sorted(counts):
        count = counts[order]
        first, last = serial + 1, serial + count
        rows.append((order, count, str(first) if first == last else f"{first} - {last}"))
        serial = last
    return ReportDocument(
        title="stopping-order histogram",
        columns=["pso", "count", "serial_range"],
        rows=rows,
        metadata=_base_metadata(
            set=str(residue_class),
            x_lo=x_lo,
            x_hi=x_hi,
            parity=parity_filter,
            total=total,
            skipped_small=skipped,
        ),
    )


# Published tallies for three member families (60001 members each); rows
# marked incomplete were still being counted at publication time.  Kept
# for side-by-side comparison only; our own tallies are authoritative.
REFERENCE_PSO_COUNTS = {
    "32x+7:x-even": {
        "counts": {11: 1, 13: 1, 16: 1, 19: 2, 21: 5, 24: 9, 26: 23, 29: 43,
                   32: 113, 34: 331, 37: 698, 39: 1966, 42: 4072, 44: 11433,
                   47: 23701, 50: 17602},
        "incomplete": {47, 50},
    },
    "32x+7:x-odd": {
        "counts": {13: 1, 16: 2, 19: 5, 21: 14, 24: 28, 26: 76, 29: 151,
                   32: 412, 34: 1239, 37: 2689, 39: 7724, 42: 16351, 44: 31309},
        "incomplete": {44},
    },
    "32x+31:x-odd": {
        "counts": {16: 1, 19: 4, 21: 14, 24: 34, 26: 103, 29: 228, 32: 665,
                   34: 2096, 37: 4787, 39: 14239, 42: 31330, 44: 6500},
        "incomplete": {44},
    },
}


def histogram_diff(histogram, reference_key):
    """Side-by-side view of a histogram against a published tally.

    Reported, never asserted: the reference uses loosely specified
    member ranges and contains unfinished rows.
    """
    reference = REFERENCE_PSO_COUNTS[reference_key]
    ours = {row[0]: row[1] for row in histogram.rows}
    rows = []
    for order in sorted(set(ours) | set(reference["counts"])):
        mine = ours.get(order, 0)
        theirs = reference["counts"].get(order, 0)
        note = "reference incomplete" if order in reference["incomplete"] else ""
        rows.append((order, mine, theirs, mine - theirs, note))
    return ReportDocument(
        title="histogram comparison",
        columns=["pso", "count", "reference", "delta", "note"],
        rows=rows,
        metadata=_base_metadata(
            reference=reference_key, **{k: v for k, v in histogram.metadata.items() if k != "tool" and k != "version"}
        ),
    )


def _formula(count, modulus):
    # echo the 25/2^k shape used for power-of-two moduli
    if modulus >= 4 and modulus & (modulus - 1) == 0:
        return f"{count}*(25/2^{modulus.bit_length() - 3})"
    return f"{count}*(100/{modulus})"


def coverage_report(stages):
    """Cumulative classified-density ledger over several explorations.

    Each stage root is weighted by its own share of the naturals, so the
    rows add up across stages; the residual row is whatever share of the
    naturals no terminal leaf classifies yet.
    """
    rows = []
    classified = Fraction(0)
    for result in stages:
        base = Fraction(1, result.root.modulus)
        ledger = coverage(result, base)
        classified += ledger.terminal_density
        groups = {}
        for leaf in result.terminal_leaves():
            key = (leaf.status.pso, leaf.residue_class.modulus)
            groups.setdefault(key, []).append(leaf.residue_class.remainder)
        for (order, modulus), remainders in sorted(groups.items()):
            share = Fraction(100 * len(remainders), modulus)
            rows.append(
                (
                    str(result.root),
                    f"n={modulus}x+{{{','.join(str(r) for r in sorted(remainders))}}}",
                    order,
                    len(remainders),
                    _formula(len(remainders), modulus),
                    exact_decimal(share),
                )
            )
    rows.append(
        (
            "",
            "residual",
            "",
            "",
            "",
            exact_decimal(100 * (1 - classified)),
        )
    )
    return ReportDocument(
        title="convergence coverage ledger",
        columns=["root", "number_set", "pso", "classes", "formula", "percent"],
        rows=rows,
        metadata=_base_metadata(
            stages=len(stages),
            classified_percent=exact_decimal(100 * classified),
        ),
    )


def _status_doc(node):
    status = node.status
    if isinstance(status, Terminal):
        doc = {"kind": "terminal", "pso": status.pso}
    elif isinstance(status, EventuallyTerminal):
        doc = {"kind": "eventually_terminal", "pso": status.pso, "threshold": status.threshold}
    elif isinstance(status, Exhausted):
        doc = {"kind": "exhausted", "reason": status.reason}
    else:
        doc = {"kind": "not_terminal"}
    if node.small_checks:
        doc["exceptions"] = [
            {"x": c.x, "member": c.member, "pso": c.pso, "note": c.note}
            for c in node.small_checks
        ]
    return doc


def tree_document(result):
    """Plain-dict form of an exploration tree, ready for JSON dumping."""
    nodes = []
    for node in result.nodes:
        nodes.append(
            {
                "id": node.node_id,
                "class": {
                    "modulus": node.residue_class.modulus,
                    "remainder": node.residue_class.remainder,
                },
                "n_form": [node.n_form.coeff, node.n_form.const],
                "term": [node.term.coeff, node.term.const],
                "step": node.step_index,
                "status": _status_doc(node),
                "children": list(node.children) if node.children else [],
            }
        )
    return {
        "root": {"modulus": result.root.modulus, "remainder": result.root.remainder},
        "budgets": {"max_steps": result.max_steps, "max_modulus": result.max_modulus},
        "stats": {
            "nodes_expanded": result.nodes_expanded,
            "max_modulus_reached": result.max_modulus_reached,
        },
        "nodes": nodes,
    }


def dumps_tree_document(doc):
    return json.dumps(doc, indent=2) + "\n"


def _status_label(node):
    status = node.status
    if isinstance(status, Terminal):
        return f"PSO={status.pso}"
    if isinstance(status, EventuallyTerminal):
        return f"PSO={status.pso} (x>{status.threshold})"
    if isinstance(status, Exhausted):
        return f"exhausted:{status.reason}"
    return "split"


def _dot_text(result):
    lines = ["digraph sieve {", "  node [shape=box];"]
    for node in result.nodes:
        label = f"{node.residue_class}\\nstep={node.step_index}\\n[{_status_label(node)}]"
        lines.append(f'  n{node.node_id} [label="{label}"];')
    for node in result.nodes:
        if node.children:
            even_id, odd_id = node.children
            lines.append(f'  n{node.node_id} -> n{even_id} [label="even"];')
            lines.append(f'  n{node.node_id} -> n{odd_id} [label="odd"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_tree(result, fmt="json"):
    """Serialize an exploration tree to JSON or Graphviz DOT text."""
    if fmt == "json":
        return dumps_tree_document(tree_document(result))
    if fmt == "dot":
        return _dot_text(result)
    raise ValueError(f"unknown export format {fmt!r}")
