"""Smoke tests for the python bindings."""

import math

import pytest

homsafe = pytest.importorskip("homsafe")


def test_linear_design_values():
    lin = homsafe.build_linear_design(2, 2.0)
    assert lin.k == [-4.0, -4.0]
    assert lin.in_cone([-4.0, 2.0])
    assert not lin.in_cone([-1.0, 5.0])
    assert homsafe.lambda_lower_bound([-4.0, 2.0]) == pytest.approx(1.5)


def test_hom_design_worked_example():
    lin = homsafe.build_linear_design(2, 2.0)
    d = homsafe.build_hom_design(lin, 1.3342, 1.0, 0.50125)
    assert d.rho == pytest.approx(0.7495, abs=1e-3)
    assert 1.0 / d.rho == pytest.approx(1.3342, abs=1e-3)
    assert d.control_bound(1.0) > 0.0


def test_hom_norm_homogeneity():
    lin = homsafe.build_linear_design(3, 2.0)
    d = homsafe.build_hom_design(lin, 2.0, 1.0)
    x = [-1.2, 0.4, -0.3]
    v = d.hom_norm(x, 1.0)
    s = 0.7
    scaled = [math.exp(s * w) * c for w, c in zip((3, 2, 1), x)]
    assert d.hom_norm(scaled, 1.0) == pytest.approx(math.exp(s) * v, rel=1e-9)


def test_filters():
    assert homsafe.filter_min(3.0, 5.0) == 3.0
    lin = homsafe.build_linear_design(3, 2.0)
    d = homsafe.build_hom_design(lin, 2.0, 1.0)
    x = [-1.0, -0.5, -0.2]
    assert d.in_cone(x, 1.0)
    margin = homsafe.delta_r(d, x, 1.0)
    assert margin > 0.0
    uh = d.u_hom(x, 1.0)
    assert homsafe.filter_fntsf(d, uh + 1.0, x, 1.0) == pytest.approx(uh)


def test_simulate_nonovershoot():
    scenario = """
n = 2
x0 = [-0.5, 0.2]
controller = homogeneous
lambda = 2
T = 1.8
r = 1
t_end = 2.0
dt = 0.001
eps_origin = 0.01
"""
    out = homsafe.simulate(scenario)
    assert out["max_overshoot"] <= 1e-6
    assert out["settling_time"] is not None
    assert out["settling_time"] <= 1.8
    assert out["csv"].startswith("t,x1,x2,u,u_nom,homnorm,r_t,")
    assert all(out["in_omega_r"])


def test_scenario_round_trip():
    text = "n = 1\nx0 = [-2]\nlambda = 1.5\n"
    s = homsafe.parse_scenario(text)
    once = homsafe.serialize_scenario(s)
    twice = homsafe.serialize_scenario(homsafe.parse_scenario(once))
    assert once == twice
    assert '"n": 1' in homsafe.scenario_to_json(s)


def test_verify_negative_control():
    # impossibly tight tolerances must fail at least one criterion and report
    # which ones by name
    results = homsafe.verify(tol_scale=1e-15)
    assert len(results) == 12
    failed = [r for r in results if not r["pass"]]
    assert failed
    assert all(r["name"] and r["detail"] for r in failed)


def test_verify_default_passes():
    results = homsafe.verify()
    assert all(r["pass"] for r in results), [r for r in results if not r["pass"]]
