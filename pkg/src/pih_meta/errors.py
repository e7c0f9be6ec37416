"""Shared exception types."""


class ContractError(ValueError):
    """An operation was called with arguments violating its contract."""


class DivergenceError(RuntimeError):
    """A training loop produced non-finite losses and aborted."""
