import math

import pytest

import scatlab


def test_slab_ray_is_straight():
    out = scatlab.scatter("minkowski_slab", [0.0, 0.0, 0.0], [1.0, 0.0, 0.3])
    a = math.sqrt(1.0 - 0.09)
    assert out["travel"] == pytest.approx(1.0 / a, abs=1e-10)
    assert out["y"] == pytest.approx([1.0 / a, 1.0, 0.3 / a], abs=1e-10)
    assert out["w_proj"] == pytest.approx([1.0, 0.0, 0.3], abs=1e-10)


def test_flat_connector_energy():
    x, y = [0.0, 1.0, 0.0], [0.5, -0.6, 0.8]
    out = scatlab.connect("product_disk", x, y)
    rho2 = 1.6**2 + 0.8**2
    assert out["energy"] == pytest.approx(0.5 * (rho2 - 0.25), abs=1e-10)
    assert out["causal"] == "spacelike"


def test_sigma_pairs_lie_on_light_cone():
    for x, y in scatlab.sigma_pairs("product_disk", 3):
        rho = math.dist(x[1:], y[1:])
        assert y[0] - x[0] == pytest.approx(rho, abs=1e-10)


def test_constant_field_action_closed_form():
    radius, phi = 5.0, 2.0 * math.asin(0.2)
    value = scatlab.boundary_action("stationary_rot", [-1.0, 0.0], [1.0, 0.0], {"B": 0.2})
    assert value == pytest.approx(radius / 2.0 * (phi + math.sin(phi)), abs=1e-9)


def test_magnetic_reduction_residuals():
    x, v = scatlab.ray_grid("stationary_rot", 2)[0]
    out = scatlab.verify_thmmag("stationary_rot", x, v)
    for key in ("exit", "length", "action"):
        assert out[key] < 1e-6


def test_experiment_report_schema():
    rep = scatlab.run_experiment(
        "scatter", {"scenario": {"kind": "minkowski_slab", "grids": {"rays": 4}}, "seed": 3}
    )
    assert rep["schema_version"] == scatlab.SCHEMA_VERSION
    assert rep["seed"] == 3
    assert len(rep["records"]) == 4
    assert rep["summary"]["pass"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(scatlab.ScenarioError):
        scatlab.run_experiment("scatter", {"scenario": {"kind": "wormhole"}})
    with pytest.raises(scatlab.ConfigError):
        scatlab.run_experiment("scatter", {"bogus": 1})
    with pytest.raises(ValueError):
        scatlab.scatter("minkowski_slab", [], [1.0])


def test_rk4_order():
    assert scatlab.rk4_endpoint_order() >= 3.7
