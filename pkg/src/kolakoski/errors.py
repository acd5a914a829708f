"""Exception types raised across the package."""

from __future__ import annotations


class KolakoskiError(Exception):
    """Base class for every error raised by this package."""

    reason = "error"

    def machine_reason(self) -> str:
        return f"{self.reason}: {self}"


class NotDifferentiable(KolakoskiError, ValueError):
    """The trimmed word contains a run of length >= 3."""

    reason = "not-differentiable"


class OutOfWindow(KolakoskiError, IndexError):
    reason = "out-of-window"


class InsufficientWindow(KolakoskiError):
    """A computation needs more generated elements than the window holds.

    ``required`` is a lower bound on the window length that would be needed.
    """

    reason = "insufficient-window"

    def __init__(self, required: int, available: int, what: str = ""):
        self.required = int(required)
        self.available = int(available)
        self.what = what
        msg = f"need at least {self.required} elements, window has {self.available}"
        if what:
            msg = f"{what}: {msg}"
        super().__init__(msg)

    def machine_reason(self) -> str:
        return f"{self.reason}: required={self.required} available={self.available}"


class WindowTooLarge(KolakoskiError, MemoryError):
    reason = "window-too-large"


class CorruptCache(KolakoskiError, ValueError):
    reason = "corrupt-cache"


class NoSDerivative(KolakoskiError, ValueError):
    reason = "no-s-derivative"


class NotFoundWithin(KolakoskiError, LookupError):
    reason = "not-found"

    def __init__(self, limit: int, what: str = ""):
        self.limit = int(limit)
        super().__init__(f"{what or 'no match'} within limit {self.limit}")


class EqualityViolation(KolakoskiError, AssertionError):
    """Occurrence words that must coincide were found to differ."""

    reason = "equality-violation"


class StructureViolation(KolakoskiError, AssertionError):
    reason = "structure-violation"
