import math

import pytest

import mcfair


def test_worked_example():
    sc = mcfair.sc_ebn0(2.8)
    mc = mcfair.mc_ebn0(2.8)
    assert abs(sc.ebn0_db + 7.967) < 0.05
    assert abs(mc.ebn0_db + 5.024) < 0.1
    beta = mcfair.beta_effective(2.8)
    assert beta.lower <= beta.beta <= beta.upper
    assert mcfair.classify_regime(sc.ebn0_linear, beta.beta, 2.8) == "noise-dominated"


def test_limit_and_partial_reuse():
    c0 = mcfair.spectral_efficiency_limit()
    assert abs(c0 - 4.2) < 0.05
    assert mcfair.partial_ebn0(2.0, 1.0).ebn0_linear == pytest.approx(mcfair.mc_ebn0(2.0).ebn0_linear, rel=1e-6)
    r0, point = mcfair.optimize_r0(4.0)
    assert 0.01 < r0 < 1.0
    assert mcfair.mc_ebn0(4.0).ebn0_db - point.ebn0_db > 6.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        mcfair.ChannelParams(alpha=0.5)
    with pytest.raises(mcfair.DomainError):
        mcfair.hurwitz_zeta(1.0, 1.0)
    with pytest.raises(mcfair.LimitExceeded):
        mcfair.mc_ebn0(5.0)
    with pytest.raises(ValueError):
        mcfair.run("plot")


def test_zeta_and_kernels():
    assert mcfair.hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    params = mcfair.ChannelParams()
    assert mcfair.phi_kernel(1.0, params) == pytest.approx((math.pi**2 - 4) / 4, rel=1e-12)
    assert mcfair.phi0_kernel(5.0) + mcfair.phi1_kernel(5.0) == pytest.approx(mcfair.phi_kernel(5.0), rel=1e-12)


def test_pfs_sandwich_and_determinism():
    lo = mcfair.pfs_lower_bound(10.0, 10)
    hi, hi_se = mcfair.pfs_upper_bound(10.0, 10, mc_samples=50000)
    sim = mcfair.simulate_pfs(10, 10.0, n_slots=2000, n_trials=10, seed=3)
    assert lo - 3 * sim["se"] <= sim["c"] <= hi + 3 * (sim["se"] + hi_se)
    assert sum(sim["selection_fractions"]) == pytest.approx(1.0)
    again = mcfair.simulate_pfs(10, 10.0, n_slots=2000, n_trials=10, seed=3)
    assert again["c"] == sim["c"]


def test_run_matches_cli_table():
    table = mcfair.run("hf-curve", c=(1.0, 4.5, 3))
    assert table["columns"] == ["c", "sc_ebn0_db", "mc_ebn0_db", "beta", "regime", "status"]
    assert table["metadata"]["command"] == "hf-curve"
    rows = mcfair.records(table)
    assert [r["status"] for r in rows] == ["ok", "ok", "limit-exceeded"]
    assert rows[2]["mc_ebn0_db"] is None
    assert isinstance(rows[0]["sc_ebn0_db"], float)
