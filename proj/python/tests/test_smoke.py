import json
import math

import numpy as np
import pytest

import deltastrip as ds


def test_soliton_mass_and_frequency_inverse():
    assert ds.soliton_mass(1.0, -1.0, 3.0) == pytest.approx(2.0, rel=1e-12)
    assert ds.omega_of_mass(2.0, -1.0, 3.0) == pytest.approx(1.0, rel=1e-10)
    assert ds.soliton_value(1.0, -1.0, 3.0, 0.0) == pytest.approx(math.sqrt(1.5), rel=1e-12)


def test_field_round_trip_through_numpy():
    grid = ds.StripGrid(4.0, 9, 3)
    values = np.arange(27, dtype=float).reshape(9, 3)
    field = ds.Field(grid, values)
    assert np.array_equal(field.to_numpy(), values)
    with pytest.raises(ds.DeltaStripError):
        ds.Field(grid, np.zeros((3, 9)))


def test_action_minimizer_matches_line_soliton():
    grid = ds.StripGrid(16.0, 129, 5)
    params = ds.ProblemParams(p=3.0, gamma=-1.0, omega=1.0, L=0.5)
    res = ds.minimize_action(params, grid, perturb_y=0.1)
    assert res.converged
    phi = ds.extend_soliton(1.0, -1.0, 3.0, grid).to_numpy()
    u = res.field.to_numpy()
    assert np.abs(u - phi).max() < 1e-2 * np.abs(phi).max()
    assert res.dy_norm < 1e-6


def test_energy_minimizer_negative_energy():
    grid = ds.StripGrid(16.0, 129, 5)
    params = ds.ProblemParams(p=2.5, gamma=-1.0, L=0.25, mass=1.0)
    res = ds.minimize_energy(params, grid)
    assert res.converged
    assert res.report.energy < 0.0
    assert res.recovered_omega > 0.25


def test_inadmissible_parameters_raise():
    grid = ds.StripGrid(8.0, 33, 3)
    with pytest.raises(ds.DeltaStripError, match="omega <= gamma"):
        ds.minimize_action(ds.ProblemParams(gamma=-2.0, omega=0.9), grid)


def test_green_mode_coefficient_value():
    spec = ds.GreensSpec(1.0, -1.0, 1.0)
    assert ds.mode_coefficient(0, 0.0, 0.0, spec) == pytest.approx(1.0, rel=1e-14)


def test_bound_closed_form_gamma_zero():
    b = ds.l_star_star_bound(1.0, 0.0, 3.0, optimize=False)
    assert b["bound_sq_fixed"] == pytest.approx(192.0 * math.pi**2, rel=1e-9)


def test_run_config_summary(tmp_path):
    doc = {
        "command": "minimize energy",
        "problem": {"p": 2.5, "gamma": -1.0, "L": 0.5, "mass": 1.0},
        "grid": {"X": 16.0, "nx": 65, "ny": 3},
        "outputs": {"out_dir": str(tmp_path)},
    }
    code, summary = ds.run_config(json.dumps(doc))
    assert code == 0
    data = json.loads(summary)
    for key in ("E", "M", "omega", "dy_norm", "residuals"):
        assert key in data
    assert (tmp_path / "summary.json").exists()
