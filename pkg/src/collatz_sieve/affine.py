"""Symbolic residue classes and affine term forms.

A residue class (M, R) is the progression {M*x + R : x >= 0}.  A term is
the integer pair (U, V) meaning U*x + V over the class variable.  Halving
is only ever applied when both components are even, so the pair stays
integral; the factor-of-two bookkeeping that would otherwise show up as
fractions is folded into class refinement by the parity split.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import UndeterminedParityError

__all__ = [
    "AffineTerm",
    "EventuallyTerminal",
    "NotTerminal",
    "Parity",
    "ResidueClass",
    "SplitBranch",
    "Terminal",
    "TerminalStatus",
    "check_terminal",
    "parity",
    "split_on_parity",
    "step",
]


@dataclass(frozen=True)
class AffineTerm:
    """U*x + V with nonnegative integer components, not both zero."""

    coeff: int
    const: int

    def __post_init__(self):
        if self.coeff < 0 or self.const < 0:
            raise ValueError(f"negative component in term ({self.coeff}, {self.const})")
        if self.coeff == 0 and self.const == 0:
            raise ValueError("the zero term never occurs in a walk")

    def evaluate(self, x):
        if x < 0:
            raise ValueError(f"class variable must be >= 0, got {x}")
        return self.coeff * x + self.const

    def __str__(self):
        return f"{self.coeff}x+{self.const}"


@dataclass(frozen=True)
class ResidueClass:
    """The progression {modulus * x + remainder : x >= 0}."""

    modulus: int
    remainder: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.remainder < self.modulus:
            raise ValueError(
                f"remainder {self.remainder} out of range for modulus {self.modulus}"
            )

    def as_term(self):
        return AffineTerm(self.modulus, self.remainder)

    def member(self, x):
        if x < 0:
            raise ValueError(f"class variable must be >= 0, got {x}")
        return self.modulus * x + self.remainder

    def contains(self, n):
        return n >= self.remainder and (n - self.remainder) % self.modulus == 0

    def members(self, count, start_x=0):
        return [self.member(x) for x in range(start_x, start_x + count)]

    @property
    def density(self):
        """Share of the naturals belonging to this class."""
        return Fraction(1, self.modulus)

    def __str__(self):
        return f"n={self.modulus}x+{self.remainder}"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    UNDETERMINED = "undetermined"


def parity(term):
    """Parity of U*x + V over all x, or UNDETERMINED when it depends on x."""
    if term.coeff & 1:
        return Parity.UNDETERMINED
    return Parity.ODD if term.const & 1 else Parity.EVEN


def step(term):
    """Apply the map symbolically: halve an even term, 3t+1 an odd one."""
    p = parity(term)
    if p is Parity.UNDETERMINED:
        raise UndeterminedParityError(f"cannot step {term}: parity depends on x")
    if p is Parity.EVEN:
        return AffineTerm(term.coeff >> 1, term.const >> 1)
    return AffineTerm(3 * term.coeff, 3 * term.const + 1)


class SplitBranch(NamedTuple):
    residue_class: ResidueClass
    n_form: AffineTerm
    term: AffineTerm


def split_on_parity(residue_class, n_form, term):
    """Substitute x = 2q and x = 2q+1; the two branches partition the class.

    Only meaningful when the term's parity is undetermined (odd U); after
    the substitution each branch has an even coefficient again.
    """
    if parity(term) is not Parity.UNDETERMINED:
        raise ValueError(f"term {term} has decided parity; nothing to split")
    m, r = residue_class.modulus, residue_class.remainder
    nc, nr = n_form.coeff, n_form.const
    u, v = term.coeff, term.const
    even = SplitBranch(
        ResidueClass(2 * m, r),
        AffineTerm(2 * nc, nr),
        AffineTerm(2 * u, v),
    )
    odd = SplitBranch(
        ResidueClass(2 * m, m + r),
        AffineTerm(2 * nc, nc + nr),
        AffineTerm(2 * u, u + v),
    )
    return even, odd


@dataclass(frozen=True)
class NotTerminal:
    pass


@dataclass(frozen=True)
class Terminal:
    pso: int


@dataclass(frozen=True)
class EventuallyTerminal:
    """Term drops below the start for every x above the threshold only."""

    pso: int
    threshold: int


TerminalStatus = NotTerminal | Terminal | EventuallyTerminal

_NOT_TERMINAL = NotTerminal()


def check_terminal(n_form, term, step_index):
    """Compare U*x + V against the start form Nc*x + Nr for all x >= 0.

    U <= Nc with V < Nr puts the term strictly below the start
    everywhere.  U < Nc with V >= Nr does so only past
    x* = floor((V - Nr) / (Nc - U)); the finitely many x <= x* are left
    to numeric checking by the caller.
    """
    nc, nr = n_form.coeff, n_form.const
    u, v = term.coeff, term.const
    if u <= nc and v < nr:
        return Terminal(step_index)
    if u < nc and v >= nr:
        return EventuallyTerminal(step_index, (v - nr) // (nc - u))
    return _NOT_TERMINAL
