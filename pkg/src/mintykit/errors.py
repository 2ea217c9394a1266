"""Exception types raised across the package."""


class MintyError(Exception):
    """Base class for all mintykit errors."""


class DimensionError(MintyError, ValueError):
    """Vectors or sets of incompatible dimension were combined."""


class InvalidWeightsError(MintyError, ValueError):
    """Convex weights are negative or do not sum to one."""


class EmptySetError(MintyError):
    """A projection or query targeted an empty set."""


class SelectionCapExceeded(MintyError):
    """The number of dual selections exceeds the configured cap."""

    def __init__(self, product, cap):
        self.product = product
        self.cap = cap
        super().__init__(
            f"dual selection count {product} exceeds cap {cap}; "
            "subsample duals or raise MINTYKIT_SELECTION_CAP")


class ConvergenceError(MintyError):
    """An iterative method stopped before reaching its accuracy target."""

    def __init__(self, message, value=None):
        self.value = value
        super().__init__(message)


class InvariantBreach(MintyError):
    """A mathematical invariant that must hold was observed to fail."""


class InternalInconsistency(MintyError):
    """Two independent decision routes disagreed; indicates a solver bug."""
