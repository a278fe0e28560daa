"""Exception types shared across the package."""


class CollinearError(ValueError):
    """Three points admit no circumscribed disc."""


class DuplicatePointError(ValueError):
    """Point already present in the triangulation."""


class DegeneratePeriodicInputError(ValueError):
    """Fewer than 3 points, or geometry unusable on the torus."""


class InsufficientBoundaryDataError(RuntimeError):
    """Outside data window too small to certify the tile set near the window."""


class MissingMarkError(ValueError):
    """A marked potential was evaluated on a tile with unmarked vertices."""


class TailTooHeavyError(RuntimeError):
    """Truncated partition-function sum cannot reach the requested tolerance."""


class GridTooCoarseError(RuntimeError):
    """Adjacent quadrature nodes disagree beyond tolerance."""


class PreconditionUnmetError(ValueError):
    """Inputs do not satisfy the hypothesis of the checked inequality."""


class ConfigError(ValueError):
    """Malformed or out-of-range experiment configuration."""
