"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input (CLI exit code 2)."""


class PreconditionError(InputError):
    """Input is well formed but violates an operation's precondition."""


class CapExceeded(RuntimeError):
    """An exact search was asked to run beyond its configured size cap (CLI exit code 4)."""
