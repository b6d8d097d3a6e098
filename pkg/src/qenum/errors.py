"""Exception hierarchy.

Contract violations (bad input, unmet preconditions) and internal consistency
failures (an identity that must hold did not) are kept apart so the CLI can
map them to distinct exit codes.
"""


class QenumError(Exception):
    pass


class ContractError(QenumError, ValueError):
    """Input violates a documented precondition."""


class MalformedSubsetError(ContractError):
    pass


class DimensionMismatchError(ContractError):
    pass


class UnsupportedDimensionError(ContractError):
    pass


class PreconditionError(ContractError):
    pass


class StabilizerError(ContractError):
    pass


class ConsistencyError(QenumError, ArithmeticError):
    """An identity that holds by construction failed beyond tolerance."""
