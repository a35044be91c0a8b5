"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class TemporalJRError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TemporalJRError, ValueError):
    """Malformed or out-of-range input (bad indices, wrong lengths, bad JSON)."""


class PreconditionError(TemporalJRError, ValueError):
    """Input is well formed but outside the domain an operation supports."""


class CapacityError(TemporalJRError, RuntimeError):
    """An enumeration or search budget would be exceeded."""
