"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class CoincidentPointsError(GeometryError):
    """Two points of a configuration coincide (below the scaled tolerance)."""


class DegenerateConfigurationError(GeometryError):
    """A triangle or tetrahedron is degenerate where a nondegenerate one is required."""


class NonRealizableMetricsError(GeometryError):
    """A distance table cannot be realized by points in R^3."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge to the requested tolerance."""
