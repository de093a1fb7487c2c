"""Secondary transmit power limits and time-switching harvest arithmetic.

ST and SR powers are capped twice: by the worst-link primary outage
constraint and by the peak power P_t. The relay's forwarding power is what
it harvests during the first alpha*T of the slot, capped again by the SR
limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import SLOT_DURATION, Scenario


@dataclass(frozen=True)
class PowerBudget:
    zeta_p: float
    p_st: float
    p_sr: float
    p_sm: float
    p_r: float


def zeta_p(rate_p: float, bandwidth: float) -> float:
    """Primary SIR threshold 2^(R_p/B) - 1."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return 2.0 ** (rate_p / bandwidth) - 1.0


def primary_outage_given_st_power(p_st: float, scenario: Scenario) -> float:
    """Worst-link primary outage when ST transmits at ``p_st``.

    Each PD sees PT_i over ST interference with exponential gains; the L
    links fade independently, so the probability that at least one falls
    below zeta_p is 1 - (P_PT l_pp / (P_ST l_sp zeta_p + P_PT l_pp))^L.
    """
    g = scenario.gains
    return _outage(p_st, g.lambda_sp, scenario)


def _outage(p_tx: float, lam_to_pd: float, scenario: Scenario) -> float:
    s = scenario.p_pt * scenario.gains.lambda_pp
    z = zeta_p(scenario.rate_primary, scenario.bandwidth)
    # 1 - (s / (p*lam*z + s))^L
    return -math.expm1(-scenario.L * math.log1p(p_tx * lam_to_pd * z / s))


def _outage_limited_power(lam_to_pd: float, scenario: Scenario) -> float:
    g = scenario.gains
    z = zeta_p(scenario.rate_primary, scenario.bandwidth)
    if z == 0.0:
        # zero primary rate: primary links can never be in outage
        return float("inf")
    # (1/(1-theta))^(1/L) - 1; expm1/log1p keep digits at small theta
    headroom = max(math.expm1(-math.log1p(-scenario.theta_p) / scenario.L), 0.0)
    return scenario.p_pt * g.lambda_pp / (z * lam_to_pd) * headroom


def max_st_power(scenario: Scenario) -> float:
    """Largest ST power meeting the primary outage constraint (no peak cap)."""
    return _outage_limited_power(scenario.gains.lambda_sp, scenario)


def max_sr_power(scenario: Scenario) -> float:
    """Largest SR power meeting the primary outage constraint (no peak cap)."""
    return _outage_limited_power(scenario.gains.lambda_rp, scenario)


def capped_powers(scenario: Scenario) -> PowerBudget:
    p_st = max_st_power(scenario)
    p_sr = max_sr_power(scenario)
    p_t = scenario.p_peak
    return PowerBudget(
        zeta_p=zeta_p(scenario.rate_primary, scenario.bandwidth),
        p_st=p_st,
        p_sr=p_sr,
        p_sm=min(p_st, p_t),
        p_r=min(p_sr, p_t),
    )


def harvested_energy(alpha, delta, p_sm, g_sr, interference_sum):
    """Energy collected over alpha*T from ST's signal plus primary interference.

    Works elementwise on numpy arrays.
    """
    return alpha * SLOT_DURATION * delta * (p_sm * g_sr + interference_sum)


def relay_harvest_power(alpha, delta, p_sm, g_sr, interference_sum):
    """Relay transmit power when the harvested energy is spent over (1-alpha)T/2."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return 2.0 * delta * alpha / (1.0 - alpha) * (p_sm * g_sr + interference_sum)


def relay_tx_power(p_srh, p_r):
    return np.minimum(p_srh, p_r) if hasattr(p_srh, "shape") else min(p_srh, p_r)
