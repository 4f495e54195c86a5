# Copyright 2026 The gpbec Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import os
import subprocess

import numpy as np
import pytest

import gpbec

TWO_PI = 2.0 * math.pi


def ball(kappa=0.0):
    return gpbec.PotentialSpec(gpbec.Profile.uniform_ball, 1.0, 1.0, kappa)


def test_version_and_ode():
    assert gpbec.__version__
    a = gpbec.radial_ode_scattering_length(ball(2.0))
    assert abs(a - (1.0 - math.tanh(1.0))) < 1e-7


def test_fourier_and_momenta():
    v = ball()
    assert gpbec.fourier_coefficient(v, 0.0) == pytest.approx(4.0 * math.pi / 3.0, rel=1e-15)
    s = gpbec.build_momentum_set(TWO_PI)
    pts = np.asarray(s.points)
    assert pts.shape == (6, 3)
    assert sorted(np.abs(pts).sum(axis=1)) == [1] * 6


def test_two_mode_phi():
    v = ball(0.5)
    s = gpbec.momentum_set_from_points([[0, 0, 1], [0, 0, -1]])
    sol = gpbec.solve_lattice_scattering(v, 3, s)
    d = TWO_PI**2 + 0.5 / 6.0 * (gpbec.fourier_coefficient(v, 0.0) + gpbec.fourier_coefficient(v, 2 * TWO_PI / 3))
    expect = -0.25 * gpbec.fourier_coefficient(v, TWO_PI / 3) / d
    assert np.allclose(sol.phi, expect, rtol=1e-12, atol=0)


def test_operators_and_ground_state():
    v = ball(0.1)
    s = gpbec.build_momentum_set(TWO_PI)
    basis = gpbec.enumerate_basis(s, 4)
    h = gpbec.assemble(gpbec.OperatorTag.Hmu, basis, v, 4, mu=1.0)
    dense = h.to_dense()
    assert np.allclose(dense, dense.T)
    energy, vec, residual, _ = gpbec.ground_state(h)
    assert energy == pytest.approx(np.linalg.eigvalsh(dense)[0], abs=1e-10)
    assert residual < 1e-9
    gamma = gpbec.one_particle_density_matrix(vec, basis)
    assert np.trace(gamma) == pytest.approx(4.0, abs=1e-12)
    csr = gpbec.to_scipy(h)
    assert abs(csr - csr.T).max() == 0.0


def test_trial_and_exp():
    v = ball(0.1)
    s = gpbec.build_momentum_set(TWO_PI)
    phi = gpbec.solve_lattice_scattering(v, 6, s)
    trial, exact = gpbec.trial_energy(v, 6, 1.0, phi)
    assert trial >= exact
    basis = gpbec.enumerate_basis(s, 6)
    b = gpbec.assemble(gpbec.OperatorTag.Bgen, basis, v, 6, phi=phi)
    x = np.zeros(basis.dim)
    x[0] = 1.0
    y, drift = gpbec.apply_exp(b, 1.0, x)
    assert drift <= 1e-10
    back, _ = gpbec.apply_exp(b, -1.0, y)
    assert np.linalg.norm(back - x) <= 2e-10


def test_errors():
    s = gpbec.build_momentum_set(TWO_PI)
    basis = gpbec.enumerate_basis(s, 2)
    with pytest.raises(gpbec.MissingPhi):
        gpbec.assemble(gpbec.OperatorTag.Bgen, basis, ball(0.1), 2)
    with pytest.raises(gpbec.BornDivergence):
        gpbec.born_resolvent_scattering_length(ball(6.0))
    with pytest.raises(gpbec.ConfigError):
        gpbec.run_command("ed", "mu.mode = explicit\n")


def test_run_command(tmp_path):
    files, failed, _ = gpbec.run_command("scattering", "gp.N = 2\ngp.cutoff_factor = 1\n", str(tmp_path))
    assert not failed
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "scattering"
    assert os.path.basename(files[-1]) == "manifest.json"


cli = os.environ.get("GPBEC_CLI")
configs = os.environ.get("GPBEC_CONFIGS")


@pytest.mark.skipif(not cli, reason="command line driver not built")
def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mu.mode = explicit\n")
    r = subprocess.run([cli, "ed", "--config", str(bad), "--out", str(tmp_path / "o")], capture_output=True)
    assert r.returncode == 1
    r = subprocess.run([cli, "ed", "--config", str(tmp_path / "missing.cfg")], capture_output=True)
    assert r.returncode == 1
    good = tmp_path / "good.cfg"
    good.write_text("potential.kappa = 0.05\ngp.N = 3\nsector.n_max = 4\n")
    r = subprocess.run([cli, "ed", "--config", str(good), "--out", str(tmp_path / "ed")], capture_output=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "ed" / "scan.csv").exists()


@pytest.mark.skipif(not (cli and configs), reason="command line driver not built")
def test_cli_seed_override(tmp_path):
    cfg = os.path.join(configs, "identity.cfg")
    args = ["--config", cfg, "--seed", "11"]
    a = subprocess.run([cli, "identity", *args, "--out", str(tmp_path / "a")], capture_output=True)
    b = subprocess.run([cli, "identity", *args, "--out", str(tmp_path / "b")], capture_output=True)
    assert a.returncode == 0 and b.returncode == 0
    ja = json.loads((tmp_path / "a" / "identity.json").read_text())
    jb = json.loads((tmp_path / "b" / "identity.json").read_text())
    assert ja == jb
    assert all(c["seed"] == 11 for c in ja["checks"])
