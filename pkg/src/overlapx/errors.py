"""Exception types shared across the package."""


class OverlapxError(Exception):
    """Base class for all errors raised by overlapx."""


class CapacityError(OverlapxError):
    """An operation would materialize more objects than the configured cap."""


class GroundSizeMismatch(OverlapxError, ValueError):
    pass


class EmptyFamilyError(OverlapxError, ValueError):
    pass


class NotDownClosedError(OverlapxError, ValueError):
    pass


class NotMaximalError(OverlapxError, ValueError):
    pass


class FormatError(OverlapxError, ValueError):
    """Malformed family, spec, or coloring text."""


class OverlapViolationError(OverlapxError, ValueError):
    """Raised where an m-overlapping tuple is required but not given."""
