# Copyright 2026 The Glyphscape Authors
# SPDX-License-Identifier: Apache-2.0

import json
import struct

import pytest

import glyphscape as gs


def png_size(data):
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    return struct.unpack(">II", data[16:24])


def test_shapes():
    assert gs.SHAPES == ["Sphere", "Cube", "Tetrahedron", "Cone", "Torus", "Cylinder"]


def test_bins():
    values = [float(i) for i in range(12)]
    edges = gs.even_bins(values, 4)
    assert edges == [0, 2.75, 5.5, 8.25, 11]
    assert gs.bin_counts(values, edges) == [3, 3, 3, 3]
    skewed = [0.001 * i for i in range(100)] + [1.5, 2.5, 3.5]
    before = max(gs.bin_counts(skewed, gs.even_bins(skewed, 4)))
    after = gs.rebalance_bins(skewed, gs.even_bins(skewed, 4), 3)
    assert max(gs.bin_counts(skewed, after)) <= before
    with pytest.raises(gs.ParameterError):
        gs.even_bins(values, 0)


def test_pca():
    data = gs.synthetic_events(300, seed=3)
    assert list(data) == ["dphi", "mass", "eg1", "eg2", "eta", "pt", "signal"]
    r = gs.pca(data, ["dphi", "mass", "eg1", "eg2"], components=3)
    assert len(r["scores"]) == 300
    assert r["eigenvalues"] == sorted(r["eigenvalues"], reverse=True)
    for c in r["components"]:
        assert sum(x * x for x in c) == pytest.approx(1.0)
    assert min(r["outlier_rank"]) == 1


def test_lens():
    assert gs.lens_transform(500, 0, 0, 0, 100, 3) == (500, 0)
    x, y = gs.lens_transform(10, 0, 0, 0, 100, 3)
    assert x == pytest.approx(100 * 4 * 0.1 / (3 * 0.1 + 1))
    assert y == 0


def test_occlusion():
    m = gs.occlusion_matrix(0.95, 128)
    assert len(m) == 6 and all(len(row) == 6 for row in m)
    assert all(0.0 <= v <= 1.0 for row in m for v in row)


def test_render():
    data = gs.synthetic_events(200, seed=4)
    mapping = json.dumps({
        "x": {"pca": 0}, "y": {"pca": 1}, "shape": "dphi", "hue": "mass",
        "leftArms": "eg1", "rightArms": "eg2", "footprint": 20,
        "pca": {"columns": ["dphi", "mass", "eg1", "eg2", "eta", "pt"]},
    })
    sprite = gs.render_png(data, mapping, 240, 200)
    assert png_size(sprite) == (240, 200)
    assert gs.render_png(data, mapping, 240, 200, direct=True) == sprite
    assert gs.render_png(data, mapping, 240, 200, lens=(120, 100, 60, 2)) != sprite
    with pytest.raises(gs.ParameterError):
        gs.render_png(data, "{}", 240, 200)
