"""Geometric primitives: envelopes, weighted Voronoi slices, dominance pairs, wedges."""

from .dominance import PairDecomposition, dominance_pairs
from .envelope import Envelope1D, envelope_locate, envelope_quadratics
from .voronoi import (
    WeightedSite,
    nn_batch_2d,
    voronoi_slice_2d,
    weighted_nn,
    weighted_voronoi_1d,
)
from .wedges import WedgeFrame, polygon_gamma, polygon_normals, polygonal_norm, wedge_frames

__all__ = [
    "Envelope1D",
    "PairDecomposition",
    "WedgeFrame",
    "WeightedSite",
    "dominance_pairs",
    "envelope_locate",
    "envelope_quadratics",
    "nn_batch_2d",
    "polygon_gamma",
    "polygon_normals",
    "polygonal_norm",
    "voronoi_slice_2d",
    "wedge_frames",
    "weighted_nn",
    "weighted_voronoi_1d",
]
