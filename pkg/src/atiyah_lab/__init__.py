"""Atiyah determinant toolkit.

Core layers:
  geom         shared Euclidean primitives
  spinor       the pair (z, w) attached to each ordered pair of points
  determinant  the normalized determinant D of a configuration
  constants    self-computed constants and integral identities
  ngon         closed form and asymptotics for regular n-gons
  fourpoint    the four-point inequality and identity toolkit
  harness      reproducible Monte Carlo verification suites
  service      HTTP surface (FastAPI) over the layers above
  cli          command-line client of the service
"""

__version__ = "0.1.0"

from .determinant import AtiyahResult, atiyah_determinant, atiyah_determinant_batch
from .errors import (
    CoincidentPointsError,
    DegenerateConfigurationError,
    GeometryError,
    NonRealizableMetricsError,
    QuadratureError,
)

__all__ = [
    "AtiyahResult",
    "atiyah_determinant",
    "atiyah_determinant_batch",
    "GeometryError",
    "CoincidentPointsError",
    "DegenerateConfigurationError",
    "NonRealizableMetricsError",
    "QuadratureError",
    "__version__",
]
