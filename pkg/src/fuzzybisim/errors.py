"""Shared exception types."""


class InputError(ValueError):
    """Malformed or out-of-contract input: files, literals, identifiers."""


class NonConvergenceError(RuntimeError):
    """A fixpoint computation hit its iteration cap before stabilizing."""
