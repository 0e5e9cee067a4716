import json
import math

import numpy as np
import pytest

import heomkit as hk


def lowering(d):
    a = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        a[k - 1, k] = math.sqrt(k)
    return a


def two_lead_baths(n_exp=7, phi=0.0):
    d = lowering(2)
    return [
        hk.BathSpec.lorentzian_fermion(d, 1.0, 10.0, +phi / 2, 0.5, n_exp, bath_id="L"),
        hk.BathSpec.lorentzian_fermion(d, 1.0, 10.0, -phi / 2, 0.5, n_exp, bath_id="R"),
    ]


def test_ado_counts_match_published_table():
    d = lowering(2)
    baths = []
    for lead in ("L", "R"):
        for chan in ("up", "dn"):
            baths.append(
                hk.BathSpec.lorentzian_fermion(
                    d, 1.0, 10.0, 0.0, 0.5, 7, bath_id=lead, channel=chan
                )
            )
    assert hk.count_ados(baths, 0, 1) == 57
    assert hk.count_ados(baths, 0, 2) == 1597
    space = hk.enumerate_space(baths, 0, 2)
    assert space.size == 1597
    assert space.index_of([], []) == 0


def test_correlation_reconstruction_is_finite_and_decaying():
    bath = two_lead_baths()[0]
    c0 = abs(bath.correlation(0.0, nu=+1))
    c5 = abs(bath.correlation(5.0, nu=+1))
    assert c0 > 0
    assert c5 < c0 * 1e-2


def test_steadystate_and_current_balance():
    baths = two_lead_baths(n_exp=4, phi=1.5)
    space = hk.enumerate_space(baths, 0, 2)
    h = np.zeros((2, 2), dtype=complex)
    h[1, 1] = -1.0
    sys = hk.SystemSpec.constant(h)
    M = hk.build_heomls(sys, baths, space, hk.Parity.EVEN)
    ss, report = hk.steadystate(M)
    assert report.residual < 1e-10
    rho = hk.reduced_density(ss)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    il = hk.current(ss, "L")
    ir = hk.current(ss, "R")
    assert abs(il + ir) < 1e-8
    assert abs(il) > 1e-4


def test_dos_matches_lorentzian_green_function():
    baths = two_lead_baths(n_exp=7, phi=0.0)
    space = hk.enumerate_space(baths, 0, 2)
    h = np.zeros((2, 2), dtype=complex)
    h[1, 1] = -1.0
    sys = hk.SystemSpec.constant(h)
    Me = hk.build_heomls(sys, baths, space, hk.Parity.EVEN)
    Mo = hk.build_heomls(sys, baths, space, hk.Parity.ODD)
    ss, _ = hk.steadystate(Me)
    grid = list(np.linspace(-12, 12, 49))
    omega, value = hk.dos(Mo, ss, lowering(2), grid, threads=2)

    def exact(w):
        sigma = sum(0.5 * 1.0 * 10.0 / (w - mu + 10.0j) for mu in (0.0, 0.0))
        return -(1.0 / (w - (-1.0) - sigma)).imag / math.pi

    worst = max(abs(v - exact(w)) for w, v in zip(omega, value))
    peak = max(abs(exact(w)) for w in omega)
    assert worst / peak < 0.01


def test_evolution_conserves_trace():
    baths = two_lead_baths(n_exp=3)
    space = hk.enumerate_space(baths, 0, 2)
    h = np.zeros((2, 2), dtype=complex)
    h[1, 1] = -1.0
    M = hk.build_heomls(hk.SystemSpec.constant(h), baths, space)
    rho0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    x0 = hk.AdosVector.from_reduced(rho0, space)
    traj = hk.evolve_ode(M, x0, list(np.linspace(0, 4, 9)))
    for state in traj:
        assert abs(np.trace(state.root()) - 1.0) < 1e-8


def test_run_config_pipeline(tmp_path):
    config = {
        "system": {"type": "fermion_level", "epsilon": -1.0},
        "baths": [
            {
                "id": "L",
                "flavor": "fermionic",
                "coupling": "d",
                "gamma": 1.0,
                "width": 10.0,
                "mu": "+phi/2",
                "kT": 0.5,
                "n_exp": 3,
            },
            {
                "id": "R",
                "flavor": "fermionic",
                "coupling": "d",
                "gamma": 1.0,
                "width": 10.0,
                "mu": "-phi/2",
                "kT": 0.5,
                "n_exp": 3,
            },
        ],
        "truncation": {"n_max": 2},
        "phi": 1.0,
        "tasks": [
            {"type": "steadystate"},
            {"type": "current", "bath": "L"},
        ],
        "output": {"directory": str(tmp_path / "out")},
    }
    hk.run_config(json.dumps(config))
    manifest = json.loads((tmp_path / "out" / "run_manifest.json").read_text())
    assert manifest["ado_count"] == 1 + 12 + 66
    assert (tmp_path / "out" / "current.csv").exists()

    entry = hk.describe_ado(json.dumps(config), "0")
    assert "ADO 0" in entry


def test_config_errors_are_raised():
    with pytest.raises(ValueError):
        hk.run_config("{\"system\": {}}")


def test_oracle_suites_callable():
    ok, detail = hk.run_oracle("gibbs")
    assert ok, detail
