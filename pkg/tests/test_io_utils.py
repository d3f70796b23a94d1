#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Tests for artifact files and the validated JSON documents."""

import sys
import os
import json
import math
import logging

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

# Configure logging
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=logging.INFO
)
logger = logging.getLogger("io_utils_test")

from geometry.anisotropy import Anisotropy
from geometry.convex_geometry import build_wulff
from geometry.errors import ConfigError, InvalidShape
from shapes.pixel_shapes import PixelShape
from shapes.shapes_energy import SubstrateShape, energy_F, random_star_polygon, winterbottom_shape
from utils.io_utils import (dumps, pixel_shape_from_dict, polygon_svg, read_csv, read_json, shape_from_dict,
                            write_csv, write_json, write_off, write_scatter_svg, write_svg)
from utils.schemas import AnisotropySpec, load_run_config, parse_phi


def test_shape_json_round_trip_keeps_energy(tmp_path):
    phi = Anisotropy.weighted([[1.2, 0.1], [0.0, 0.9]])
    shapes = [
        random_star_polygon(np.random.default_rng(6), 40, 1.0),
        SubstrateShape.from_polygon([[0, 0], [3, 0], [3, 3], [0, 3]], [[[1, 1], [1, 2], [2, 2], [2, 1]]]),
    ]
    for k, shape in enumerate(shapes):
        path = write_json(str(tmp_path / f"shape{k}.json"), shape.to_dict())
        restored = shape_from_dict(read_json(path))
        assert energy_F(restored, phi, 0.2).total == pytest.approx(energy_F(shape, phi, 0.2).total, abs=1e-12)
        assert restored.volume == pytest.approx(shape.volume, abs=1e-12)


def test_3d_shape_json_round_trip(tmp_path):
    phi = Anisotropy.pnorm(1, dim=3)
    shape = winterbottom_shape(phi, 0.5, 1.0)
    restored = shape_from_dict(read_json(write_json(str(tmp_path / "box.json"), shape.to_dict())))
    assert energy_F(restored, phi, 0.5).total == pytest.approx(energy_F(shape, phi, 0.5).total, rel=1e-12)


def test_plain_vertex_list_and_malformed_shapes():
    shape = shape_from_dict({"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    assert shape.volume == pytest.approx(1.0)
    with pytest.raises(InvalidShape):
        shape_from_dict({"polygons": [{"holes": []}]})


def test_pixel_shape_json(tmp_path):
    shape = PixelShape.from_rows(["010", "111"], offset=1)
    restored = pixel_shape_from_dict(read_json(write_json(str(tmp_path / "p.json"), shape.to_dict())))
    assert restored.rows == shape.rows and restored.offset == 1
    with pytest.raises(InvalidShape):
        pixel_shape_from_dict({"width": 4, "rows": ["010", "111"]})


def test_json_is_stable():
    data = {"b": np.float64(0.1), "a": np.arange(3), "c": np.bool_(True)}
    assert dumps(data) == dumps(dict(reversed(list(data.items()))))
    assert json.loads(dumps(data)) == {"a": [0, 1, 2], "b": 0.1, "c": True}


def test_csv_keeps_full_precision(tmp_path):
    rows = [{"param": 1.01, "ratio": 1 / 3}, {"param": 2.0, "ratio": ""}]
    path = write_csv(str(tmp_path / "t.csv"), rows, ["param", "ratio"])
    back = read_csv(path)
    assert float(back[0]["ratio"]) == 1 / 3
    assert back[1]["ratio"] == ""


def test_svg_timestamp_only_when_not_reproducible():
    shape = winterbottom_shape(Anisotropy.pnorm(1), 0.5, 1.0)
    assert "generated" not in polygon_svg(shape, reproducible=True)
    assert "<!-- generated" in polygon_svg(shape)
    assert polygon_svg(shape, reproducible=True) == polygon_svg(shape, reproducible=True)
    assert polygon_svg(build_wulff(Anisotropy.pnorm(2), 64), reproducible=True).count(" L ") == 63


def test_svg_and_off_files(tmp_path):
    write_svg(str(tmp_path / "w.svg"), build_wulff(Anisotropy.pnorm(1)), reproducible=True)
    assert (tmp_path / "w.svg").read_text().startswith("<?xml")

    cube = build_wulff(Anisotropy.pnorm(1, dim=3))
    write_off(str(tmp_path / "c.off"), cube)
    lines = (tmp_path / "c.off").read_text().splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == f"{len(cube.vertices)} {len(cube.facets)} 0"
    assert len(cube.facets) == 6
    with pytest.raises(ValueError):
        write_off(str(tmp_path / "square.off"), build_wulff(Anisotropy.pnorm(1)))


def test_scatter_svg_is_reproducible(tmp_path):
    x, y = [1e-4, 1e-3, 1e-2], [2e-4, 2e-3, 2e-2]
    first = write_scatter_svg(str(tmp_path / "a.svg"), x, y, "deficit", "asymmetry^2")
    second = write_scatter_svg(str(tmp_path / "b.svg"), x, y, "deficit", "asymmetry^2")
    assert open(first).read() == open(second).read()


def test_parse_phi_forms(tmp_path):
    cases = [
        # (text, dim, direction, expected value, description)
        ("pnorm:2", None, (3.0, 4.0), 5.0, "shorthand"),
        ("pnorm:inf", None, (3.0, -4.0), 4.0, "infinity shorthand"),
        ("pnorm:1", 3, (1.0, 1.0, 1.0), 3.0, "shorthand with dimension"),
        ("weighted:[[2,0],[0,1]]", None, (1.0, 0.0), 2.0, "weighted shorthand"),
        ("crystalline:[[1,1],[-1,1],[-1,-1],[1,-1]]", 2, (0.3, 0.4), 0.7, "crystalline shorthand"),
        ('{"kind": "pnorm", "p": 2, "lambda_mod": 0.5}', None, (0.0, -2.0), 1.0, "inline JSON"),
    ]
    for text, dim, nu, expected, description in cases:
        phi = parse_phi(text, dim)
        assert phi(nu) == pytest.approx(expected), description

    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"kind": "pnorm", "p": 2, "shift": [0.0, 0.5]}))
    assert parse_phi(str(path))((0.0, -1.0)) == pytest.approx(1.5)


def test_parse_phi_errors():
    bad = [
        "weighted:[[2,0],[0,1]]",  # with dim 3 below
        "hexagonal:1",
        "pnorm:0.5",
        "crystalline:[[1,0],[2,0],[1,1]]",
        '{"kind": "pnorm"}',
        '{"kind": "pnorm", "p": 2, "colour": "red"}',
        "weighted:[[2,0],",
    ]
    with pytest.raises(ConfigError):
        parse_phi(bad[0], 3)
    for text in bad[1:]:
        with pytest.raises(ConfigError):
            parse_phi(text)


def test_anisotropy_spec_round_trip():
    phi = Anisotropy.weighted([[2, 0], [0, 1]])
    rebuilt = AnisotropySpec.model_validate(phi.to_dict()).build()
    assert rebuilt((0.6, 0.8)) == pytest.approx(phi((0.6, 0.8)))
    inf = AnisotropySpec.model_validate(Anisotropy.pnorm(math.inf).to_dict()).build()
    assert inf((3.0, -4.0)) == 4.0


def test_run_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"phi": {"kind": "pnorm", "p": 2}, "lambda": 0.5, "volume": 1.0,
                                "nvertices": 64, "trials": 5, "seed": 7}))
    run = load_run_config(str(path))
    assert run.lambda_ == 0.5 and run.seed == 7
    assert run.phi.build()((3.0, 4.0)) == pytest.approx(5.0)

    for broken in ({"phi": {"kind": "pnorm", "p": 2}, "lambda": 0.5, "volume": -1},
                   {"phi": {"kind": "pnorm", "p": 2}, "lambda": 0.5, "nvertices": 4},
                   {"phi": {"kind": "pnorm", "p": 2}}):
        path.write_text(json.dumps(broken))
        with pytest.raises(ConfigError):
            load_run_config(str(path))
    with pytest.raises(ConfigError):
        load_run_config(str(tmp_path / "missing.json"))
