"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid physical configuration (non-positive power/noise, non-finite gain)."""


class WrongCaseError(ValueError):
    """A closed-form solver was called outside its geometric regime."""


class EmptyReductionError(RuntimeError):
    """Strategy elimination produced an empty set (misrouted degenerate game)."""


class DegenerateGeometryError(ValueError):
    """Corner geometry makes the requested quantity undefined."""


class ResolutionError(ValueError):
    """Grid or sample resolution below the supported minimum."""


class LpFailureError(RuntimeError):
    """Linear-programming solve failed (unbounded, cycling cap, or bad certificate)."""
