"""warplab: a desk-scale numerical verification lab for warped product geometry.

The package checks curvature integrals, hypersurface intersection criteria and
Laplacian spectral bounds on explicitly constructed warped product spaces,
using exact jet derivatives, quadrature, finite differences and discrete
eigensolvers.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateTestFunction,
    DomainError,
    ExpressionError,
    HorizonError,
    MissingSpectrum,
    NoConvergence,
    NonConvergence,
    NonpositiveMeanCurvature,
    NonPositiveWarp,
    ScenarioError,
    TangencyError,
    WarpLabError,
)
from .warp import (
    Domain1D,
    MeanCurvatureProfile,
    WarpingFunction,
    catalog,
    catalog_names,
    from_expression,
    schwarzschild_profile,
    schwarzschild_throat_profile,
)
