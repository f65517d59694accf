"""Exception types shared across the package."""


class AffrigError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(AffrigError):
    """Malformed input: non-finite entries, shape mismatch, bad parameters."""


class UnsupportedInstanceError(AffrigError):
    """Instance outside the supported regime (e.g. fewer than d+1 vertices)."""


class ImproperFrameworkError(AffrigError):
    """Configuration whose affine span is smaller than the ambient dimension."""

    def __init__(self, span_dim: int, dim: int):
        self.span_dim = span_dim
        self.dim = dim
        super().__init__(
            f"configuration is improper: affine span has dimension {span_dim}, "
            f"ambient dimension is {dim}"
        )


class DegenerateInstanceError(AffrigError):
    """Singular or otherwise unusable instance (e.g. disconnected rubber-band system)."""


class NotAffinelyRigidError(AffrigError):
    """Scan hypergraph is not affinely rigid; carries the observed corank."""

    def __init__(self, corank: int, expected: int):
        self.corank = corank
        self.expected = expected
        super().__init__(
            f"scan hypergraph is not affinely rigid: affinity corank {corank}, "
            f"expected {expected}"
        )


class InconsistentScansError(AffrigError):
    """Scan data is mutually inconsistent beyond tolerance (corank too small)."""


class NonUniqueTransformError(AffrigError):
    """Length directions lie on a conic at infinity; the metric upgrade is not unique."""


class InconsistentLengthsError(AffrigError):
    """Length constraints admit no positive-semidefinite Gram solution."""
