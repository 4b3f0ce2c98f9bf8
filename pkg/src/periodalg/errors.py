"""Exception types and shared result flags used across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class NotFound:
    """Returned (never raised) by bounded searches that come up empty.

    Carries the bound that was exhausted so reports can state how far
    the search went.
    """

    bound: int


class PeriodalgError(Exception):
    """Base class for all errors raised by this package."""


class IncompatibleBasis(PeriodalgError):
    """Radicand sets cannot be merged into one radical basis."""


class BasisNotClosed(PeriodalgError):
    """A product of radicands falls outside the basis; extend it first."""


class DivisionByZero(PeriodalgError, ZeroDivisionError):
    """Inversion or division of an exactly-zero element."""


class PrecisionExhausted(PeriodalgError):
    """Adaptive interval refinement hit the precision cap.

    Cannot occur for nonzero elements of moderate height; guards misuse.
    """


class DimensionMismatch(PeriodalgError):
    """Vector length does not match the lattice's coordinate count."""


class EmptyInput(PeriodalgError):
    """An operation requiring at least one element got none."""


class ParseError(PeriodalgError):
    """Malformed expression text.

    `pos` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class NonMonomialDivisor(PeriodalgError):
    """Division is only defined for single-monomial denominators."""


class UnknownRadicand(PeriodalgError):
    """An atom references a radicand absent from the domain's basis."""


class ShiftNotInDomain(PeriodalgError):
    """Shift vector is not a member of the function's domain lattice."""


class NonIntegralShift(PeriodalgError):
    """Shift amount has non-integer coordinates over the domain basis."""


class NotInDomain(PeriodalgError):
    """Evaluation point is not a member of the domain lattice."""


class ModulusMismatch(PeriodalgError):
    """Interval patterns with different moduli cannot be compared."""


class FullLine(PeriodalgError):
    """The pattern is the whole line; every real is a period."""


class EmptyPattern(PeriodalgError):
    """The pattern is empty; the fundamental period is undefined."""


class CommensurableInput(PeriodalgError):
    """Density search requires incommensurable generators."""


class SearchExhausted(PeriodalgError):
    """A bounded fallback search hit its bound without a witness."""

    def __init__(self, bound: int):
        super().__init__(f"search exhausted at bound {bound}")
        self.bound = bound


class Cancelled(PeriodalgError):
    """A cooperative cancellation token stopped a long-running search."""


class ScenarioError(PeriodalgError):
    """Base class for scenario-file problems (exit code 2)."""


class ScenarioSyntaxError(ScenarioError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ScenarioNameError(ScenarioError):
    """Unbound or rebound name in a scenario file."""


class AnalysisError(PeriodalgError):
    """An analysis failed while executing (exit code 3).

    Wraps the underlying module error together with the analysis index.
    """

    def __init__(self, index: int, kind: str, cause: Exception):
        super().__init__(f"analysis #{index} ({kind}): {cause}")
        self.index = index
        self.kind = kind
        self.cause = cause
