import json
import math

import numpy as np
import pytest

import pvistab as pv

REF = pv.BasicState(rho=1.0, sound_speed=2.0, v=2.0, H=1.0, Hc=0.7, eps=0.01)


def test_derived_constants():
    d = pv.derive_constants(REF)
    assert d.z_plus == pytest.approx(1.2752874832127046, rel=1e-13)
    assert d.z_minus == pytest.approx(0.47669251678729552, rel=1e-13)
    assert d.alfven_speed == pytest.approx(1.0)
    assert pv.check_hypotheses(REF).all_pass
    assert pv.stability_class(REF) == "TwoBoundaryRoots"


def test_state_validation():
    bad = pv.BasicState(rho=-1.0, sound_speed=1.0, v=0.0, H=0.0, Hc=0.0, eps=0.1)
    with pytest.raises(ValueError):
        pv.validate_state(bad)


def test_root_scan():
    rep = pv.scan_boundary_roots(REF)
    assert rep.predicted_class == "TwoBoundaryRoots"
    assert len(rep.roots) == 2
    assert rep.count_consistent and rep.quartic_consistent
    for r in rep.roots:
        assert r.residual <= 1e-8
        assert abs(abs(r.V) - 1.1292) < 2e-3
        assert abs(pv.lopatinskii_det(REF, r.pt)) <= 1e-8


def test_symbol_and_modes():
    pt = pv.normalize_to_sigma(0.3, 0.4, 0.6)
    c = pv.symbol_coefficients(REF, pt)
    md = pv.eigen_modes(REF, pt)
    A = pv.assemble_interface_matrix(c)
    e1 = np.asarray(md.e1)
    assert np.linalg.norm(A @ e1 + md.omega1 * e1) < 1e-10 * np.linalg.norm(e1)
    cls, dist = pv.classify_point(REF, pt)
    assert cls == "Interior"
    assert dist == pytest.approx(pt.gamma)


def test_gamma_sweep_slope():
    rep = pv.scan_boundary_roots(REF)
    g = np.array([1.0 + 0.2j, 0.5j, -0.2 + 0.1j])
    sweep = pv.gamma_sweep(REF, rep.roots[0].pt, [1e-1, 1e-2, 1e-3, 1e-4, 1e-5], g)
    assert sweep.slope == pytest.approx(-1.0, abs=0.1)


def test_lift_trace():
    N, L = 64, 16.0
    x = np.arange(N) * L / N - L / 2.0
    values = np.exp(-(x**2) / 2.0).astype(complex)
    front = pv.FrontSample(N=N, L=L, values=list(values))
    front_norm = pv.sobolev_norm(front, 2.0)
    front.values = list(values / front_norm)
    lifted = pv.lift(front, pv.make_cutoff(4.0), [0.0, 0.01, 0.02])
    trace = np.asarray(lifted.psi)[0]
    assert np.max(np.abs(trace - np.asarray(front.values))) <= 1e-12
    assert pv.verify_flatness(lifted, 0.01) < 1e-6
    assert pv.diffeo_check(lifted).ok


def test_sweep_roundtrip(tmp_path):
    cfg_text = json.dumps(
        {
            "base": {"rho": 1.0, "sound_speed": 2.0, "v": 2.0, "H": 1.0,
                     "Hc": 0.7, "eps": 0.01},
            "tasks": ["hypotheses", "roots"],
            "out": str(tmp_path / "out"),
        }
    )
    cfg = pv.parse_config(cfg_text)
    pv.validate_config(cfg)
    rep = pv.run_sweep(cfg)
    assert rep.all_consistent
    assert len(rep.rows) == 1
    assert rep.rows[0].stability == "TwoBoundaryRoots"
    assert rep.rows[0].root_count == 2
    assert pv.write_reports(rep, cfg) == 0
    for name in ("diagram.csv", "roots.csv", "energy.csv",
                 "certifications.json", "summary.json"):
        assert (tmp_path / "out" / name).exists()
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["exit_code"] == 0


def test_sweep_determinism(tmp_path):
    base = {"rho": 1.0, "sound_speed": 2.0, "v": 2.0, "H": 1.0, "Hc": 0.7,
            "eps": 0.01}
    outputs = []
    for tag in ("a", "b"):
        cfg = pv.parse_config(json.dumps(
            {"base": base, "tasks": ["hypotheses", "roots"], "jobs": 2,
             "out": str(tmp_path / tag)}))
        pv.write_reports(pv.run_sweep(cfg), cfg)
        outputs.append((tmp_path / tag / "diagram.csv").read_bytes())
    assert outputs[0] == outputs[1]
