"""Folded Delzant polygons and the local models of near-symplectic toric 4-manifolds."""

from .delzant import DelzantPolygon, PolygonError, validate_delzant, weights_at_vertex
from .folded import FoldedPolygon, corner, fold, standard_fold, validate_folded_polygon
from .lattice import AffineMapZ, apply_affine, primitive
from .polyfile import parse_polygon, serialize_polygon

__all__ = [
    "AffineMapZ",
    "DelzantPolygon",
    "FoldedPolygon",
    "PolygonError",
    "apply_affine",
    "corner",
    "fold",
    "parse_polygon",
    "primitive",
    "serialize_polygon",
    "standard_fold",
    "validate_delzant",
    "validate_folded_polygon",
    "weights_at_vertex",
]
