"""Exception types raised across the package.

Class names double as wire-level error names: the CLI prints them on
stderr and the HTTP service returns them in the ``error`` field, so they
are part of the public contract and must stay stable.
"""


class RiskBnError(Exception):
    """Base class for all domain errors."""


# --- graph / network construction ---

class CycleError(RiskBnError):
    """A directed cycle was found where a DAG is required."""


class UnknownVariable(RiskBnError):
    """A variable id does not exist in the network."""


class UnknownState(RiskBnError):
    """A state label is not among the variable's declared states."""


class ValidationError(RiskBnError):
    """A structural invariant does not hold (bad row sums, bad parents...)."""


# --- document / dataset parsing ---

class SchemaError(RiskBnError):
    """Malformed network document (not parseable into the expected shape)."""


class VersionError(RiskBnError):
    """Unsupported network document format version."""


class HeaderError(RiskBnError):
    """CSV header does not name exactly the declared variables."""


class UnknownStateError(RiskBnError):
    """A CSV cell holds a value that is not a declared state label."""

    def __init__(self, row: int, column: str, value: str):
        super().__init__(f"row {row}, column {column!r}: unknown state {value!r}")
        self.row = row
        self.column = column
        self.value = value


class MissingValueError(RiskBnError):
    """A CSV cell is empty; incomplete records are rejected, not imputed."""

    def __init__(self, row: int, column: str):
        super().__init__(f"row {row}, column {column!r}: missing value")
        self.row = row
        self.column = column


# --- learning ---

class MismatchError(RiskBnError):
    """Dataset variables do not match the network/DAG they are used with."""


class InvalidAlpha(RiskBnError):
    """Dirichlet prior weight must be strictly positive."""


class TooFewRecords(RiskBnError):
    """Not enough records for the requested fold split."""


# --- structure search ---

class InvalidFamily(RiskBnError):
    """Bad (child, parents) combination passed to a family score."""


class ConstraintError(RiskBnError):
    """Structure constraints are inconsistent (overlap or cyclic requireds)."""


class NoOpError(RiskBnError):
    """An edit would add an arc that exists or remove one that does not."""


# --- inference ---

class ZeroEvidenceError(RiskBnError):
    """The conditioning event has probability zero; the query is undefined."""


class OverlapError(RiskBnError):
    """Evidence and target variables overlap."""


class EmptyStateSet(RiskBnError):
    """Multi-state evidence must list at least one state."""


# --- analysis ---

class NotInBase(RiskBnError):
    """A what-if improvement names a variable absent from the base case."""


class SameState(RiskBnError):
    """A what-if improvement equals the base state, so it changes nothing."""


class BadAddress(RiskBnError):
    """A (variable, parent configuration, state) cell address is invalid."""
