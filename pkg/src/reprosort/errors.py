"""Exception hierarchy shared across the package."""


class ReproSortError(Exception):
    """Base class for every error raised by this package."""


class UsageError(ReproSortError, ValueError):
    """A caller violated an API contract (bad argument, bad combination)."""


class WidthMismatchError(UsageError):
    """Operands of different float widths were mixed; widths are never coerced."""


class FormatError(ReproSortError, ValueError):
    """A binary input does not conform to the raw little-endian float format."""


class RunIntegrityError(ReproSortError, RuntimeError):
    """A spilled run file was found out of order or truncated while merging."""


class ComputationError(ReproSortError, ArithmeticError):
    """A metric produced a non-finite intermediate; never silently saturated."""
