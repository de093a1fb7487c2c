import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ehrelay.power import (
    capped_powers,
    harvested_energy,
    max_sr_power,
    max_st_power,
    primary_outage_given_st_power,
    relay_harvest_power,
    relay_tx_power,
    zeta_p,
)
from ehrelay.montecarlo import estimate_primary_outage
from ehrelay.scenario import default_scenario

# P_SR for the reference network at theta_p = 1e-2, L = 2, evaluated term by
# term at 30 digits: 100 * 16 / ((2^0.4 - 1) * 1.25^-2) * (0.99^-1/2 - 1)
P_SR_REFERENCE = 39.4185487225146279


def unit(L=1, theta_p=0.5, **kw):
    """Scenario with P_PT = lambda_pp = lambda_sp = lambda_rp = zeta_p = 1."""
    # PT-PD, ST-PD, SR-PD all at unit distance; R_p = 1 gives zeta_p = 1
    cfg = dict(L=L, theta_p=theta_p, rate_primary=1, p_pt_db=0,
               pos_pt="0,1", pos_pd="1,1", pos_st="1,0", pos_sr="1,2", pos_sd="3,3")
    cfg.update(kw)
    return default_scenario(**cfg)


def test_zeta_p():
    assert zeta_p(1, 1) == 1
    assert zeta_p(0, 1) == 0
    assert zeta_p(0.4, 1) == 2**0.4 - 1


def test_unit_scenario_is_unit():
    s = unit()
    g = s.gains
    assert (s.p_pt, g.lambda_pp, g.lambda_sp, g.lambda_rp) == pytest.approx((1, 1, 1, 1))


def test_primary_outage_examples():
    assert primary_outage_given_st_power(1.0, unit(L=1)) == pytest.approx(0.5)
    assert primary_outage_given_st_power(1.0, unit(L=2)) == pytest.approx(0.75)
    assert primary_outage_given_st_power(1e-300, unit(L=1)) == pytest.approx(0.0, abs=1e-15)


def test_max_st_power_examples():
    assert max_st_power(unit(theta_p=0.0)) == 0.0
    assert max_st_power(unit(L=1, theta_p=0.5)) == pytest.approx(1.0)


def test_max_sr_power_examples(reference):
    assert max_sr_power(unit(theta_p=0.0)) == 0.0
    # SR and ST both at unit distance from the PD: lambda_rp = lambda_sp
    assert max_sr_power(unit(theta_p=0.2)) == pytest.approx(max_st_power(unit(theta_p=0.2)), rel=1e-15)
    assert max_sr_power(reference) == pytest.approx(P_SR_REFERENCE, rel=1e-13)


@pytest.mark.parametrize("theta", [1e-3, 1e-2, 1e-1])
@pytest.mark.parametrize("L", range(1, 7))
def test_round_trip(theta, L):
    s = default_scenario(L=L, theta_p=theta)
    assert primary_outage_given_st_power(max_st_power(s), s) == pytest.approx(theta, rel=1e-12)


@given(st.floats(1e-6, 0.99), st.integers(1, 8))
def test_round_trip_property(theta, L):
    s = default_scenario(L=L, theta_p=theta)
    assert primary_outage_given_st_power(max_st_power(s), s) == pytest.approx(theta, rel=1e-10)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.integers(1, 6))
def test_outage_increasing_in_power_and_L(p1, p2, L):
    s, s_more = default_scenario(L=L), default_scenario(L=L + 1)
    lo, hi = sorted((p1, p2))
    if hi > lo * (1 + 1e-9):
        assert primary_outage_given_st_power(lo, s) < primary_outage_given_st_power(hi, s)
    assert primary_outage_given_st_power(lo, s) < primary_outage_given_st_power(lo, s_more)


@given(st.floats(0, 0.99), st.floats(0, 0.99), st.integers(1, 6))
def test_max_power_monotone(t1, t2, L):
    lo, hi = sorted((t1, t2))
    assert max_st_power(default_scenario(L=L, theta_p=lo)) <= max_st_power(default_scenario(L=L, theta_p=hi))
    s = default_scenario(L=L, theta_p=lo)
    assert max_st_power(default_scenario(L=L + 1, theta_p=lo)) <= max_st_power(s)


def test_capped_powers():
    s = default_scenario(theta_p=0.1, p_peak_db=10 * math.log10(3))
    b = capped_powers(s)
    assert b.p_st > 3 and b.p_sm == pytest.approx(3)
    s = default_scenario(theta_p=1e-3, p_peak_db=40)
    b = capped_powers(s)
    assert b.p_sm == b.p_st < s.p_peak
    b = capped_powers(default_scenario(theta_p=0.0))
    assert b.p_sm == 0 and b.p_r == 0


@given(st.floats(0, 0.999), st.integers(1, 6), st.floats(-10, 40))
def test_budget_invariants(theta, L, peak_db):
    s = default_scenario(L=L, theta_p=theta, p_peak_db=peak_db)
    b = capped_powers(s)
    assert 0 <= b.p_sm <= min(b.p_st, s.p_peak)
    assert 0 <= b.p_r <= min(b.p_sr, s.p_peak)


def test_harvest_arithmetic():
    assert harvested_energy(0.0, 0.5, 1.0, 2.0, 2.0) == 0.0
    assert harvested_energy(0.5, 0.0, 1.0, 2.0, 2.0) == 0.0
    assert harvested_energy(1 / 3, 0.5, 1.0, 2.0, 2.0) == pytest.approx(2 / 3)
    assert relay_harvest_power(1 / 3, 0.5, 1.0, 2.0, 2.0) == pytest.approx(2.0)
    assert relay_harvest_power(1 / 3, 0.5, 1.0, 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        relay_harvest_power(1.0, 0.5, 1.0, 1.0, 1.0)


@given(st.floats(0.01, 0.99), st.floats(0, 1), st.floats(0, 100), st.floats(0, 10), st.floats(0, 100))
def test_harvest_power_consistent_with_energy(alpha, delta, p_sm, g_sr, interf):
    e = harvested_energy(alpha, delta, p_sm, g_sr, interf)
    p = relay_harvest_power(alpha, delta, p_sm, g_sr, interf)
    assert p == pytest.approx(2 * e / (1 - alpha), rel=1e-12, abs=1e-300)


def test_harvest_power_linear_in_odds():
    a1 = 0.2
    odds = a1 / (1 - a1)
    a2 = 2 * odds / (1 + 2 * odds)
    assert relay_harvest_power(a2, 0.5, 1, 1, 1) == pytest.approx(2 * relay_harvest_power(a1, 0.5, 1, 1, 1))


def test_relay_tx_power():
    assert relay_tx_power(5, 3) == 3
    assert relay_tx_power(2, 3) == 2
    assert relay_tx_power(0, 7) == 0
    np.testing.assert_array_equal(relay_tx_power(np.array([5.0, 2.0]), 3.0), [3.0, 2.0])


@pytest.mark.parametrize("L", [1, 3])
def test_worst_link_outage_against_sampling(L):
    s = default_scenario(L=L, theta_p=0.05)
    p_st = max_st_power(s)
    est = estimate_primary_outage(s, p_st, 400_000, seed=7)
    assert abs(est.p_hat - 0.05) <= 4 * est.std_err
