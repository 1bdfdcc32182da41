"""Exception bases shared by services and the command line."""


class DataError(Exception):
    """Input data does not match what an operation requires."""

    exit_code = 2


class InvariantViolation(Exception):
    """An internal invariant was broken; indicates a bug or corrupt model."""

    exit_code = 3
