"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """A size, time or memory budget would be exceeded.

    ``progress`` carries whatever partial result was available when the
    budget tripped (for instance the f-vector computed so far).
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress
