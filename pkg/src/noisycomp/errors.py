"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """Malformed probabilistic object (bad mass, negative entry, shape mismatch)."""


class DomainError(ValueError):
    """Query outside the support/domain of a probabilistic object."""


class EnumerationLimitError(RuntimeError):
    """Exact enumeration would exceed the configured block cap; sample instead."""


class CapacityExceededError(RuntimeError):
    """Requested rate or codebook size is not achievable on this instance."""


class BlockOverflowError(ValueError):
    """A lifted function produced more symbols than fit in the block."""
