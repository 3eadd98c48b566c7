"""Exception types shared across modules."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


class InsufficientData(ValueError):
    """A truncated object was queried beyond the data it stores."""


class NotEnoughBlocks(ValueError):
    """The minimal element has fewer blocks than the target has terms."""


class NotFound(RuntimeError):
    """A bounded search found no witness; this is not a disproof."""


class DepthExceeded(ValueError):
    """The maximal element is truncated too shallowly for the requested target."""
