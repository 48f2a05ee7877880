"""Exception types shared across the package."""


class InvalidGraph(ValueError):
    """Graph specification is not a connected simply laced spherical diagram."""


class NotOrthogonal(ValueError):
    """Input roots are not mutually orthogonal."""


class ClosureBound(RuntimeError):
    """A subgroup closure exceeded its configured element bound."""


class StructureError(RuntimeError):
    """A structural invariant (base point selection, semidirect split,
    catalog signature) failed validation."""


class InternalConsistency(RuntimeError):
    """The normalization pipeline produced an impossible intermediate value.
    Indicates a bug, not bad input."""


class DimensionGuard(RuntimeError):
    """A matrix module is larger than the configured size limit."""
