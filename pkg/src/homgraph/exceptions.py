"""Exception types shared across the package."""


class HomGraphError(Exception):
    """Base class for errors raised by homgraph."""


class CapExceededError(HomGraphError):
    """An exhaustive or brute-force computation would exceed its work cap.

    Attributes
    ----------
    cost : float
        Estimated cost of the refused computation, in the cap's units.
    cap : float
        The cap that was in force.
    """

    def __init__(self, what, cost, cap):
        self.what = what
        self.cost = cost
        self.cap = cap
        super().__init__(
            f"{what}: estimated cost {cost:.3g} exceeds cap {cap:.3g}"
        )


class FormatError(HomGraphError, ValueError):
    """A file or JSON document does not follow the expected schema."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
