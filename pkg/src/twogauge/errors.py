"""Exception types shared across the library."""


class TwoGaugeError(Exception):
    """Base class for every error raised by this package."""


class GroupDomainError(TwoGaugeError, ValueError):
    """Operand is not a member of the expected group, or operands mix groups."""


class LogRangeError(TwoGaugeError, ValueError):
    """Logarithm requested at or beyond the cut locus.

    Carries the offending eigenvalue so callers can see how far outside the
    injectivity radius the argument sits.
    """

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class CompositionError(TwoGaugeError, ValueError):
    """Endpoint mismatch when composing cells, paths or bigons.

    source/target hold the two values that failed to match.
    """

    def __init__(self, message, source=None, target=None):
        super().__init__(message)
        self.source = source
        self.target = target


class ParseError(TwoGaugeError, ValueError):
    """Syntax error in the expression DSL, with byte offset and expectation."""

    def __init__(self, message, offset, expected=None):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.expected = expected or []


class EvalError(TwoGaugeError, ValueError):
    """Runtime failure while evaluating an expression (division by zero, overflow).

    subexpression is the rendered source of the node that failed.
    """

    def __init__(self, message, subexpression=None):
        super().__init__(message)
        self.subexpression = subexpression


class GeometryError(TwoGaugeError, ValueError):
    """Invalid path/bigon construction (bad reparametrization, degree, margins)."""


class BudgetExceeded(TwoGaugeError, RuntimeError):
    """Enumeration refused because the state count exceeds the budget."""

    def __init__(self, message, size=None, budget=None):
        super().__init__(message)
        self.size = size
        self.budget = budget


class ConfigError(TwoGaugeError, ValueError):
    """Scenario/config rejection. Collects every resolution error, not just the first."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
