"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class NoSignChange(ValueError):
    """A root bracket does not straddle a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration or subdivision cap."""


class UnsupportedRegion(ValueError):
    """The (environment, information pair) combination has no implemented formula."""


class DegenerateRegion(ValueError):
    """The region has zero area, so uniform statistics are undefined."""


class DominanceError(ValueError):
    """The second region's boundary does not dominate the first one's."""


class SequenceError(ValueError):
    """A discrete sequence is malformed or violates its invariants."""


class TreeSizeError(RuntimeError):
    """The history tree of a dependent sequence exceeds the node cap."""
