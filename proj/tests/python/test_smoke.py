"""Smoke tests for the _cnoma extension module."""

import math

import pytest

import _cnoma as cn


def scenario_I():
    return cn.Scenario(
        "I",
        cn.FadingParams(1.5, 10.0),
        cn.FadingParams(1.5, 2.0),
        cn.FadingParams(1.5, 10.0),
    )


def test_kernels():
    assert cn.q_function(0.0) == pytest.approx(0.5)
    assert cn.q_function(1.0) == pytest.approx(0.15865525393145705, rel=1e-12)
    assert cn.ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert cn.hyp2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2 * math.log(2), rel=1e-12)
    nodes, weights = cn.gauss_laguerre(2)
    assert nodes == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], rel=1e-12)
    assert sum(weights) == pytest.approx(1.0, abs=1e-13)
    g = cn.meijer_g_3345([0.0, 1.0, 0.5, -0.5], [1.5, 1.5, -0.5, 0.0, 0.0], 0.7)
    assert g == pytest.approx(0.21685986103691442, rel=1e-7)


def test_kernel_errors():
    with pytest.raises(ValueError):
        cn.ln_gamma(-1.0)
    with pytest.raises(ValueError):
        cn.hyp2f1(1.0, 1.0, 2.0, 1.5)
    with pytest.raises(cn.ContourError):
        cn.meijer_g_3345([2.0, 2.0, 2.0, 9.0], [0.3, 0.3, 0.3, 9.0, 9.0], 1.0)


def test_protocol_bookkeeping():
    hyb = cn.EhProtocol.hybrid(0.1, 0.1, 0.95)
    dp = cn.derive_power(hyb)
    assert dp.phi == pytest.approx(2 / 1.1)
    assert dp.varpi == pytest.approx(0.9)
    assert dp.psi == pytest.approx(0.95 * (0.1 + 0.2 / 0.9))
    assert cn.derive_power(cn.EhProtocol.no_eh()).psi is None

    w = cn.constellation_weights(cn.PowerAllocation.from_alpha2(0.1))
    assert list(w.zeta_i) == pytest.approx([1.6, 0.4])
    assert sum(w.nu_j) == 2


def test_analytic_breakdown():
    b = cn.e2e_aber(
        scenario_I(),
        cn.EhProtocol.hybrid(0.1, 0.1, 0.95),
        cn.PowerAllocation.from_alpha2(0.1),
        20.0,
    )
    assert b.relay_s1 == pytest.approx(3.6852670610547399e-5, rel=5e-8)
    assert b.phase2_u1 == pytest.approx(5.328273333309531e-4, rel=5e-8)
    assert b.e2e_u2 == pytest.approx(1.2803293429820625e-3, rel=5e-8)
    assert not b.phase2_u1_via_oracle
    # e2e composition identity
    assert b.e2e_u1 == pytest.approx(1 - (1 - b.relay_s1) * (1 - b.phase2_u1))


def test_oracles_cross_check():
    w = cn.constellation_weights(cn.PowerAllocation.from_alpha2(0.1))
    relay = cn.FadingParams(1.5, 10.0)
    gamma = 2 / 1.1 * 100.0
    got = cn.oracle_single_hop(
        [(0.5, w.zeta_i[0]), (0.5, w.zeta_i[1])], 0.9 * gamma, relay
    )
    assert got == pytest.approx(3.6852670610547399e-5, rel=1e-8)


def test_simulation_determinism_and_agreement():
    sc = scenario_I()
    prot = cn.EhProtocol.hybrid(0.1, 0.1, 0.95)
    pa = cn.PowerAllocation.from_alpha2(0.1)
    stop = cn.StoppingRule(min_errors=100, max_bits=1 << 20)
    a = cn.run_point(sc, prot, pa, 10.0, seed=42, stop=stop, workers=1)
    b = cn.run_point(sc, prot, pa, 10.0, seed=42, stop=stop, workers=4)
    assert (a.bits, a.relay_err_s1, a.e2e_err_u2) == (
        b.bits,
        b.relay_err_s1,
        b.e2e_err_u2,
    )
    ana = cn.e2e_aber(sc, prot, pa, 10.0)
    emp = a.relay_err_s2 / a.bits
    se = math.sqrt(emp * (1 - emp) / a.bits)
    assert abs(emp - ana.relay_s2) < 5 * se


def test_optimizers():
    sc = scenario_I()
    alpha_grid = [0.025 * k for k in range(1, 21)]
    a2, _ = cn.optimize_alpha(
        sc, cn.EhProtocol.hybrid(0.1, 0.1, 0.95), 20.0, alpha_grid
    )
    assert 0.1 <= a2 <= 0.25
    beta, rho, _ = cn.optimize_eh(
        sc,
        cn.PowerAllocation.from_alpha2(0.1),
        20.0,
        [0.0, 0.2, 0.4],
        [0.0, 0.2],
    )
    assert beta in (0.0, 0.2, 0.4)
    assert rho in (0.0, 0.2)
