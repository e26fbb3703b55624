"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the physical or mathematical domain of an operation."""


class GammaPoleError(DomainError):
    """Gamma function evaluated at (or too close to) a non-positive integer.

    Attributes
    ----------
    nearest_pole : int
        The pole closest to the offending argument.
    """

    def __init__(self, x: float, nearest_pole: int):
        self.x = x
        self.nearest_pole = nearest_pole
        super().__init__(
            f"gamma function pole: x={x!r} is within the exclusion band "
            f"of the pole at {nearest_pole}"
        )


class ConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        self.estimate = estimate
        self.error_bound = error_bound
        super().__init__(
            f"{message} (best estimate {estimate!r}, error bound {error_bound!r})"
        )


class DivergenceError(DomainError):
    """The requested integral diverges (e.g. infrared divergence at T > 0)."""


class FitError(ValueError):
    """Power-law fit cannot be performed on the given data."""
