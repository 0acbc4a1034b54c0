# Copyright 2026 The Glyphscape Authors
# SPDX-License-Identifier: Apache-2.0
"""Occlusion-robust 3D glyph scatterplots."""

from ._glyphscape import (
    SHAPES,
    BindError,
    GlyphscapeError,
    IngestionError,
    ParameterError,
    bin_counts,
    even_bins,
    lens_transform,
    occlusion_matrix,
    pca,
    rebalance_bins,
    render_png,
    synthetic_events,
)

__all__ = [
    "SHAPES",
    "BindError",
    "GlyphscapeError",
    "IngestionError",
    "ParameterError",
    "bin_counts",
    "even_bins",
    "lens_transform",
    "occlusion_matrix",
    "pca",
    "rebalance_bins",
    "render_png",
    "synthetic_events",
]
