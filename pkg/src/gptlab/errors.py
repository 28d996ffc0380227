"""Exception types that the CLI maps to exit codes."""


class InputError(ValueError):
    """Malformed input: bad file, unknown label, out-of-range argument. Exit code 3."""


class InvariantError(RuntimeError):
    """A structural invariant failed: negative probability beyond tolerance,
    signalling marginal, non-normalized distribution, invalid witness. Exit code 2."""
