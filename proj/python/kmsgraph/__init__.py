"""KMS states of the gauge action on graph Toeplitz algebras.

Thin Python facade over the C++ core: parse a graph, locate the critical
inverse temperature, walk the KMS simplex, and cross-check states against
the truncated path-space representation.
"""

try:
    from ._kmsgraph import (  # type: ignore[attr-defined]
        AdmissibilityError,
        Graph,
        GraphParseError,
        analyze,
        critical_state,
        cylinder_measure,
        simplex_extreme_points,
        spectral_radius,
        state,
        verify,
        y_vector,
    )
except ImportError:  # pragma: no cover - build-tree layout
    from _kmsgraph import (  # type: ignore[no-redef]
        AdmissibilityError,
        Graph,
        GraphParseError,
        analyze,
        critical_state,
        cylinder_measure,
        simplex_extreme_points,
        spectral_radius,
        state,
        verify,
        y_vector,
    )

__all__ = [
    "AdmissibilityError",
    "Graph",
    "GraphParseError",
    "analyze",
    "critical_state",
    "cylinder_measure",
    "simplex_extreme_points",
    "spectral_radius",
    "state",
    "verify",
    "y_vector",
]

__version__ = "0.1.0"
