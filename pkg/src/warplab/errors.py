"""Exception types shared across the lab."""


class WarpLabError(Exception):
    """Base class for all warplab errors."""


class ExpressionError(WarpLabError):
    """Malformed warp expression; carries the column of the offending token."""

    def __init__(self, message, column=None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class DomainError(WarpLabError):
    """Evaluation point outside an interval domain, or wrong base kind."""


class NonPositiveWarp(WarpLabError):
    """A warping function must stay strictly positive."""


class HorizonError(WarpLabError):
    """Flux factor 1 - 2m/f^q dropped to zero or below during integration."""


class NonConvergence(WarpLabError):
    """Quadrature refinement failed the Cauchy test repeatedly."""


class TangencyError(WarpLabError):
    """Two hypersurfaces met tangentially; the intersection is not transversal."""


class MissingSpectrum(WarpLabError):
    """Fiber descriptor has no known spectrum."""


class NoConvergence(WarpLabError):
    """Linear or eigenvalue solver did not reach the requested residual."""


class NonpositiveMeanCurvature(WarpLabError):
    """Boundary mean curvature is not positive; the spectral bound does not apply."""


class DegenerateTestFunction(WarpLabError):
    """The angle test function carries no usable Rayleigh content."""


class ScenarioError(WarpLabError):
    """Scenario file failed to parse or validate; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
