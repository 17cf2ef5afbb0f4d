"""Exception types shared across the package."""


class CorrDynError(Exception):
    """Base class for all errors raised by corrdyn."""


class DimensionMismatch(CorrDynError, ValueError):
    """Operand dimensions are inconsistent with the declared factorization."""


class InvalidDimension(CorrDynError, ValueError):
    """A dimension parameter is outside its allowed range."""


class NotHermitian(CorrDynError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotUnitary(CorrDynError, ValueError):
    """A matrix required to be unitary is not, beyond tolerance."""


class Unphysical(CorrDynError, ValueError):
    """A candidate density operator fails positivity beyond the slack.

    Carries the offending minimum eigenvalue in ``min_eigenvalue``.
    """

    def __init__(self, min_eigenvalue: float, message: str | None = None):
        self.min_eigenvalue = float(min_eigenvalue)
        if message is None:
            message = f"minimum eigenvalue {self.min_eigenvalue:.3e} below tolerance"
        super().__init__(message)


class SingularPropagator(CorrDynError, ArithmeticError):
    """The evolution superoperator is numerically non-invertible at ``time``."""

    def __init__(self, time: float, condition: float):
        self.time = float(time)
        self.condition = float(condition)
        super().__init__(
            f"propagator at t={self.time:.6g} has condition estimate "
            f"{self.condition:.3e} above the invertibility guard"
        )


class OutsideDomain(CorrDynError, ValueError):
    """The input state is outside the domain of a preparation map."""


class UnphysicalInitialState(CorrDynError, ValueError):
    """Initial reduced state is incompatible with the configured correlations."""


class ConfigError(CorrDynError, ValueError):
    """A scenario or preparation configuration is malformed."""
