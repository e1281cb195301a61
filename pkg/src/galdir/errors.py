"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (two independent computations disagree).

    Raising this means either a bug in this package or a counterexample to a
    verified statement; either way it must never be swallowed.
    """


class OutOfTheoremRange(ValueError):
    """The instance does not satisfy the hypotheses of the requested check."""


class LacunaryShapeError(ValueError):
    """A degree-np polynomial does not have the expected lacunary product shape.

    Carries the full linear-multiplicity profile so the caller can inspect
    which hypothesis broke down.
    """

    def __init__(self, message, profile):
        super().__init__(f"{message}; multiplicity profile {profile}")
        self.profile = tuple(profile)


class PointSetFormatError(ValueError):
    """Malformed point-set file; carries the 1-based offending line number."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number
