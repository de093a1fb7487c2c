import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ehrelay.analytic import secondary_outage_analytic
from ehrelay.montecarlo import (
    CHUNK,
    ChannelDraw,
    EHMode,
    compare_modes,
    estimate_outage,
    sample_channels,
    slot_outcome,
    stream,
)
from ehrelay.power import capped_powers
from ehrelay.scenario import default_scenario

W, WO = EHMode.WITH_INTERFERENCE, EHMode.WITHOUT_INTERFERENCE


def draws(s, n=50_000, seed=3):
    return sample_channels(s, stream(seed, 0), n)


def one_slot(L=2, **gains):
    base = {k: 1.0 for k in ("g_sr", "g_rd")}
    base.update({k: np.ones(L) for k in ("g_pp", "g_sp", "g_rp", "g_pr", "g_pd")})
    base.update(gains)
    return ChannelDraw(**{k: np.atleast_1d(v)[None] if k not in ("g_sr", "g_rd") else np.atleast_1d(v)
                          for k, v in base.items()})


def test_sample_mean():
    s = default_scenario()
    d = sample_channels(s, stream(0, 0), 10**6)
    assert abs(d.g_sr.mean() - 16) <= 3 * 16 / 1e3
    assert (d.g_pr >= 0).all() and (d.g_sr >= 0).all()


def test_sample_shapes():
    d = sample_channels(default_scenario(L=3), stream(0, 0), 5)
    for name in ("g_pp", "g_sp", "g_rp", "g_pr", "g_pd"):
        assert getattr(d, name).shape == (5, 3)
    assert d.g_sr.shape == d.g_rd.shape == (5,)
    assert len(d) == 5


def test_sample_determinism():
    s = default_scenario()
    a, b = sample_channels(s, stream(9, 4), 100), sample_channels(s, stream(9, 4), 100)
    np.testing.assert_array_equal(a.g_pd, b.g_pd)
    c = sample_channels(s, stream(9, 5), 100)
    assert not np.array_equal(a.g_pd, c.g_pd)


def test_zero_direct_gain_is_outage():
    s = default_scenario()
    assert slot_outcome(one_slot(g_sr=0.0), s, 0.5, capped_powers(s)).all()


def test_vanishing_interference_is_success():
    s = default_scenario()
    tiny = np.full(2, 1e-12)
    d = one_slot(g_pr=tiny, g_pd=tiny)
    assert not slot_outcome(d, s, 0.9, capped_powers(s), W).any()


def _sir_sd(d, s, alpha, mode):
    from ehrelay.power import relay_harvest_power
    b = capped_powers(s)
    extra = s.p_pt * d.g_pr.sum(axis=1) if mode is W else 0.0
    p = np.minimum(relay_harvest_power(alpha, s.delta, b.p_sm, d.g_sr, extra), b.p_r)
    return p * d.g_rd / (s.p_pt * d.g_pd.sum(axis=1))


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_mode_pathwise_dominance(alpha):
    s = default_scenario()
    d = draws(s)
    assert (_sir_sd(d, s, alpha, W) >= _sir_sd(d, s, alpha, WO)).all()
    b = capped_powers(s)
    assert not (slot_outcome(d, s, alpha, b, W) & ~slot_outcome(d, s, alpha, b, WO)).any()


@pytest.mark.parametrize("field,values", [("delta", (0.2, 0.5, 0.9)), ("power_peak_db", (0.0, 10.0, 20.0, 30.0))])
def test_dominance_in_delta_and_peak(field, values):
    base = default_scenario()
    d = draws(base)
    prev = None
    for v in values:
        s = base.replace(**{field: v})
        out = slot_outcome(d, s, 0.4, capped_powers(s), W)
        if prev is not None:
            assert not (out & ~prev).any()  # no success turned into outage
        prev = out


def test_reference_point_agrees_with_closed_form():
    s = default_scenario(L=2, theta_p=1e-2, p_peak_db=20)
    est = estimate_outage(s, 0.4, 10**6, seed=42)
    assert abs(est.p_hat - secondary_outage_analytic(s, 0.4)) <= 3 * est.std_err


@pytest.mark.parametrize("L,theta_p,alpha", [(1, 1e-2, 0.1), (2, 1e-2, 0.1), (1, 1e-1, 0.3), (4, 1e-3, 0.5)])
def test_exact_joint_quadrature_agrees(L, theta_p, alpha):
    s = default_scenario(L=L, theta_p=theta_p)
    est = estimate_outage(s, alpha, 10**6, seed=5)
    assert abs(est.p_hat - oracles.outage_exact(s, alpha)) <= 3 * est.std_err


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.99))
@settings(max_examples=25, deadline=None)
def test_single_sample(seed, alpha):
    est = estimate_outage(default_scenario(), alpha, 1, seed)
    assert est.p_hat in (0.0, 1.0) and est.std_err == 0.0 and est.n == 1


@pytest.mark.parametrize("alpha", [0.1, 0.4, 0.8])
def test_baseline_never_better_with_common_draws(alpha):
    res = compare_modes(default_scenario(), alpha, 10**6, seed=8)
    assert res[WO].p_hat >= res[W].p_hat


def test_compare_modes_matches_single_runs():
    s = default_scenario()
    res = compare_modes(s, 0.3, 100_000, seed=2)
    for m in (W, WO):
        assert res[m] == estimate_outage(s, 0.3, 100_000, seed=2, mode=m)


def test_workers_do_not_change_result():
    s = default_scenario()
    n = 3 * CHUNK + 123
    assert estimate_outage(s, 0.3, n, 17) == estimate_outage(s, 0.3, n, 17, workers=3)


def test_repeatable():
    s = default_scenario()
    assert estimate_outage(s, 0.6, 200_000, 1) == estimate_outage(s, 0.6, 200_000, 1)
    assert estimate_outage(s, 0.6, 200_000, 1) != estimate_outage(s, 0.6, 200_000, 2)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_std_err_formula(k, n):
    from ehrelay.montecarlo import _estimate
    k = min(k, n)
    e, e4 = _estimate(k, n, 0, W), _estimate(4 * k, 4 * n, 0, W)
    assert e.std_err == pytest.approx(math.sqrt(e.p_hat * (1 - e.p_hat) / n))
    assert e4.std_err == pytest.approx(e.std_err / 2, abs=1e-15)


def test_silenced_transmitter():
    est = estimate_outage(default_scenario(theta_p=0.0), 0.5, 1000, 0)
    assert est.p_hat == 1.0 and est.std_err == 0.0
    res = compare_modes(default_scenario(theta_p=0.0), 0.5, 1000, 0)
    assert all(r.p_hat == 1.0 for r in res.values())


@pytest.mark.parametrize("kw", [dict(n=0), dict(alpha=0.0), dict(alpha=1.0)])
def test_bad_arguments(kw):
    args = dict(scenario=default_scenario(), alpha=0.5, n=10, seed=0)
    args.update(kw)
    with pytest.raises(ValueError):
        estimate_outage(**args)


def test_mode_strings():
    assert EHMode("without-interference-eh") is WO
    est = estimate_outage(default_scenario(), 0.5, 10, 0, mode="with-interference-eh")
    assert est.mode is W
