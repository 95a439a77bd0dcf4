import math
import os
import subprocess
import xml.etree.ElementTree as ET

import pytest

import cbdrs


def nominal():
    return cbdrs.Scenario(1.0, 0.5, 1.0)


def test_thresholds():
    th = cbdrs.thresholds(nominal())
    assert th.t1 == pytest.approx(1.0)
    assert th.t2 == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert th.tc == pytest.approx(2.0)


def test_invalid_scenario():
    with pytest.raises(ValueError):
        cbdrs.Scenario(1.0, 1.5, 1.0)


def test_region_and_points():
    s = nominal()
    r = cbdrs.region_at(1.4, s)
    assert r.regime == "post_t2_hypothesis"
    assert r.chord_x == pytest.approx(1.235)
    cp = cbdrs.characteristic_points(1.4, s)
    assert cp["q1"][1] == pytest.approx(math.sqrt(1.96 - 1.235**2), abs=1e-12)
    assert cbdrs.characteristic_points(0.6, s)["q1"] is None
    poly = cbdrs.boundary_polyline(cbdrs.region_at(1.0, s), 8)
    assert len(poly) == 10
    assert all(cbdrs.contains(cbdrs.region_at(1.0, s), p, s) for p in poly)
    with pytest.raises(ValueError, match="pursuit concluded"):
        cbdrs.region_at(2.5, s)


def test_propagate_short_horizon():
    s = nominal()
    cfg = cbdrs.SimConfig.defaults_for(s)
    cfg.horizon = 1.0
    snaps = cbdrs.propagate(s, cfg)
    assert [round(x["t"], 9) for x in snaps] == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    last = snaps[-1]
    assert all(a[1] == d[1] for a, d in zip(last["xi"], last["xd"]))
    assert last["containment"].violations == 0


def test_switch_point_extrema():
    s = nominal()
    rep = cbdrs.hypothesis_extrema_check((0.0, 0.0), (1.2, -0.9), 8.0, s)
    assert rep.max_at_extreme_x and rep.min_at_extreme_y
    grid = cbdrs.grid_search_extrema((0.0, 0.0), (1.2, -0.9), 8.0, s, 3600)
    env = cbdrs.multiswitch_oracle((0.0, 0.0), (1.2, -0.9), 8.0, s, legs=3, trials=500, seed=3)
    assert grid.min_value - 1e-6 <= env.min_found <= env.max_found <= grid.max_value + 1e-6


def test_config_round_trip():
    s, sim = cbdrs.parse_config(cbdrs.default_config_text())
    assert (s.a, s.v_i, s.v_d) == (1.0, 0.5, 1.0)
    assert sim.dt == 0.2 and sim.branching == 18
    with pytest.raises(ValueError, match="unknown key"):
        cbdrs.parse_config("sim.nope = 1\n")


@pytest.mark.skipif("CBDRS_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_svgs_are_well_formed(tmp_path):
    cli = os.environ["CBDRS_CLI"]
    expected = {
        "region_1.0000.svg": ["circles", "chord", "arc", "points"],
        "cloud_1.0000.svg": ["circles", "chord", "arc", "cloud"],
        "ellipses.svg": ["reachable", "ellipses", "maxima", "minima", "targets"],
    }
    subprocess.run([cli, "region", "--t", "1.0", "--svg", "--out", str(tmp_path)], check=True)
    subprocess.run([cli, "simulate", "--svg", "--out", str(tmp_path)], check=True)
    subprocess.run([cli, "optimize", "--svg", "--out", str(tmp_path)], check=True)
    for name, layers in expected.items():
        root = ET.parse(tmp_path / name).getroot()
        assert root.get("data-layers").split(",") == layers
        ids = [g.get("id") for g in root.iter("{http://www.w3.org/2000/svg}g") if g.get("id")]
        assert ids == layers
