import cmath
import json
import pathlib

import numpy as np
import pytest

import facegaudin as fg

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"
TAU = 0.1 + 0.9j


def test_elliptic_periods():
    z, c = 0.31 + 0.27j, 0.2 + 0.05j
    assert abs(fg.zeta11(z + 1, TAU) - fg.zeta11(z, TAU)) < 1e-10
    assert abs(fg.zeta11(z + TAU, TAU) - fg.zeta11(z, TAU) + 2j * cmath.pi) < 1e-10
    ratio = fg.w(c, z + TAU, TAU) / fg.w(c, z, TAU)
    assert abs(ratio - cmath.exp(2j * cmath.pi * c)) < 1e-10
    assert fg.theta11(0.0, TAU) == 0


def test_pole_is_reported():
    with pytest.raises(fg.DomainError):
        fg.zeta11(1.0 + TAU, TAU)


def test_config_errors():
    text = (CONFIGS / "a1_fund_fund.yaml").read_text() + "bogus: 1\n"
    with pytest.raises(fg.ConfigError, match="unknown key 'bogus'"):
        fg.Config.parse(text)


def test_full_verify_passes_and_is_deterministic():
    cfg = fg.Config.load(str(CONFIGS / "a1_verma_m1.yaml"))
    a = fg.run("full-verify", cfg)
    b = fg.run("full-verify", cfg)
    assert a["pass"]
    assert a["jsonl"] == b["jsonl"]
    lines = [json.loads(l) for l in a["jsonl"].splitlines()]
    assert len(lines) == len(a["records"])
    assert all(r["pass"] for r in lines)
    assert len(a["sweep_u"]) == 100


def test_negative_control_fails():
    cfg = fg.Config.load(str(CONFIGS / "a1_verma_m1.yaml"))
    assert not fg.run("eigen-check", cfg, negative_control=True)["pass"]


def test_transfer_matrix_shape_and_periodicity():
    cfg = fg.Config.load(str(CONFIGS / "a1_fund_fund.yaml"))
    xi = np.array([0.23 + 0.02j])
    u = 0.4 + 0.6j
    a = fg.transfer_matrix(cfg, u, xi)
    b = fg.transfer_matrix(cfg, u + 1, xi)
    assert (0,) in a and (2,) in a
    for key in a:
        assert a[key].shape == (2, 2)
        np.testing.assert_allclose(a[key], b[key], rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(a[(2,)], 0.5 * np.eye(2))


def test_bethe_roots_give_eigenvectors():
    cfg = fg.Config.load(str(CONFIGS / "a1_verma_m1.yaml"))
    sols = fg.solve_bethe(cfg)
    assert len(sols) >= 1
    t = sols[0]["t"]
    us = [0.3 + 0.45j, 0.71 + 0.2j]
    hs = [np.array([0.2 + 0.03j]), np.array([-0.35 + 0.01j])]
    assert fg.eigen_residual(cfg, t, us, hs) < 1e-7
    assert fg.eigen_residual(cfg, t + 1e-3, us, hs) > 1e-4
    psi = fg.bethe_vector(cfg, t, hs[0])
    assert np.abs(psi).max() > 0
    assert np.isfinite(fg.eigenvalue(cfg, t, us[0]))
