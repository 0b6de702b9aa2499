"""Exception types shared across the package."""


class BudgetExceeded(Exception):
    """A walk did not finish within its step budget.

    Carries the offending start value so callers can report a
    would-be counter-example candidate instead of hanging.
    """

    def __init__(self, n, budget):
        self.n = n
        self.budget = budget
        super().__init__(f"no stopping term for n={n} within {budget} steps")


class UndeterminedParityError(Exception):
    """A symbolic term with odd coefficient cannot be stepped; split first."""


class BudgetMismatch(Exception):
    """Two exploration results were produced under different budgets."""


class MismatchFound(Exception):
    """A symbolic leaf disagrees with the numeric engine.

    ``witness`` is the first failing (class, x, member, expected, actual).
    """

    def __init__(self, witness, report=None):
        self.witness = witness
        self.report = report
        super().__init__(f"cross-check mismatch: {witness}")
