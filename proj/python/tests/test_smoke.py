import math
import pathlib

import numpy as np
import pytest

import nlpf

ROOT = pathlib.Path(__file__).resolve().parents[2]
DEFAULT = str(ROOT / "configs" / "default.ini")


def test_yosida_fixes_one_and_vectorizes():
    assert nlpf.yosida_ln(1.0, 1e-3) == 0.0
    x = np.array([0.5, 1.0, 2.0])
    y = nlpf.yosida_ln(x, 1e-12)
    assert y.shape == (3,)
    assert np.allclose(y, np.log(x), atol=1e-9)


def test_default_config_loads_and_validates():
    cfg = nlpf.Config.load(DEFAULT)
    assert cfg.validate() == []
    assert cfg.nodes == 33
    assert cfg.coords.shape == (33, 1)
    assert len(cfg.digest) == 16


def test_bad_config_raises():
    with pytest.raises(nlpf.ConfigError):
        nlpf.Config.parse("[model]\nepsilonn = 1\n")
    with pytest.raises(ValueError):
        nlpf.Config.parse("[kernel]\ntype = box\n")


def test_run_shapes_and_positivity():
    cfg = nlpf.Config.load(DEFAULT)
    traj = nlpf.run(cfg, N=10)
    assert traj.N == 10
    assert math.isclose(traj.h, 0.1)
    assert traj.theta.shape == (11, 33)
    assert traj.t[-1] == pytest.approx(1.0)
    assert traj.theta.min() > 0
    assert len(traj.reports) == 10
    assert all(r["contraction_ratio"] <= r["kappa"] + 1e-6 for r in traj.reports)
    np.testing.assert_allclose(traj.u, cfg.epsilon * traj.theta + np.log(traj.theta), atol=1e-9)


def test_diagnostics_close():
    traj = nlpf.run(nlpf.Config.load(DEFAULT))
    d = traj.diagnose()
    assert max(d["identity_defect"]) < 1e-9
    assert min(d["entropy_defects"]) >= -1e-12
    assert all(l <= r * (1 + 1e-12) for l, r in zip(d["energy_lhs"], d["energy_rhs_split"]))
    assert max(traj.identity_defects().values()) < 1e-10


def test_runs_are_deterministic(tmp_path):
    cfg = nlpf.Config.load(DEFAULT)
    a = nlpf.run(cfg)
    b = nlpf.run(cfg)
    assert np.array_equal(a.phi, b.phi)
    files = a.write(tmp_path / "a", diagnostics=True)
    b.write(tmp_path / "b", diagnostics=True)
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_step_failure_maps_to_exception():
    cfg = nlpf.Config.parse("[solver]\nfp_max_iter = 1\n")
    with pytest.raises(nlpf.StepFailure):
        nlpf.run(cfg, N=20)


def test_studies():
    cfg = nlpf.Config.load(DEFAULT)
    h = nlpf.cauchy_h(cfg, divisors=[16, 32, 64])
    assert h["inequality_holds"]
    assert len(h["rows"]) == 2
    e = nlpf.cauchy_eps(cfg)
    assert e["inequality_holds"]
    assert e["uniform_growth"] <= 1.25
    assert [q["eps"] for q in e["uniform"]] == [0.1, 0.05, 0.025, 0.0125]
