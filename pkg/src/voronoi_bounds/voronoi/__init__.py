"""Voronoi's algorithm for perfect forms and the resulting cell complex."""

from .perfect import (
    Facet,
    PerfectFormRecord,
    VoronoiError,
    canonical_form,
    enumerate_perfect,
    facets,
    initial_form,
    is_equivalent,
    neighbor,
)

__all__ = [
    "Facet",
    "PerfectFormRecord",
    "VoronoiError",
    "canonical_form",
    "enumerate_perfect",
    "facets",
    "initial_form",
    "is_equivalent",
    "neighbor",
]
