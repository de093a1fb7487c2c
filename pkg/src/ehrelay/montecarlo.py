"""Monte Carlo outage estimator, independent of the closed forms.

Each slot draws every channel power gain, applies the harvest rule and the
relay power cap, and declares outage when min(SIR_SR, SIR_SD) < xi_s.
Samples are generated in fixed-size chunks; chunk ``k`` always comes from
the Philox stream keyed by (seed, k), so the count for a given (seed, n) is
the same whether chunks run serially or across processes.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .analytic import xi_s
from .power import PowerBudget, capped_powers, relay_harvest_power, zeta_p
from .scenario import Scenario

CHUNK = 1 << 16


class EHMode(str, Enum):
    WITH_INTERFERENCE = "with-interference-eh"
    WITHOUT_INTERFERENCE = "without-interference-eh"


@dataclass(frozen=True)
class ChannelDraw:
    """Squared channel magnitudes for a batch of slots.

    Per-primary-pair gains have shape (n, L); the rest have shape (n,).
    """

    g_pp: np.ndarray
    g_sr: np.ndarray
    g_rd: np.ndarray
    g_sp: np.ndarray
    g_rp: np.ndarray
    g_pr: np.ndarray
    g_pd: np.ndarray

    def __len__(self):
        return len(self.g_sr)


@dataclass(frozen=True)
class MonteCarloEstimate:
    p_hat: float
    n: int
    std_err: float
    seed: int
    mode: EHMode | None
    outages: int


def stream(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based generator for one chunk of samples."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def sample_channels(scenario: Scenario, rng: np.random.Generator, n: int = 1) -> ChannelDraw:
    """Independent exponential gains with the scenario's means (inverse-CDF sampling)."""
    g = scenario.gains
    L = scenario.L

    def exp(lam, shape):
        return lam * rng.standard_exponential(shape, method="inv")

    return ChannelDraw(
        g_pp=exp(g.lambda_pp, (n, L)),
        g_sr=exp(g.lambda_sr, n),
        g_rd=exp(g.lambda_rd, n),
        g_sp=exp(g.lambda_sp, (n, L)),
        g_rp=exp(g.lambda_rp, (n, L)),
        g_pr=exp(g.lambda_pr, (n, L)),
        g_pd=exp(g.lambda_pd, (n, L)),
    )


def slot_outcome(
    draw: ChannelDraw,
    scenario: Scenario,
    alpha: float,
    budget: PowerBudget,
    mode: EHMode = EHMode.WITH_INTERFERENCE,
) -> np.ndarray:
    """Boolean outage indicator per slot in ``draw``."""
    mode = EHMode(mode)
    p_pt = scenario.p_pt
    interf_r = p_pt * draw.g_pr.sum(axis=1)
    interf_d = p_pt * draw.g_pd.sum(axis=1)
    harvest_extra = interf_r if mode is EHMode.WITH_INTERFERENCE else 0.0
    p_srh = relay_harvest_power(alpha, scenario.delta, budget.p_sm, draw.g_sr, harvest_extra)
    p_rm = np.minimum(p_srh, budget.p_r)
    threshold = xi_s(scenario.rate_secondary, scenario.bandwidth, scenario.L, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        sir_sr = budget.p_sm * draw.g_sr / interf_r
        sir_sd = p_rm * draw.g_rd / interf_d
    return ~(np.minimum(sir_sr, sir_sd) >= threshold)


def _chunk_counts(args) -> tuple[int, ...]:
    scenario, alpha, seed, chunk, size, modes = args
    draw = sample_channels(scenario, stream(seed, chunk), size)
    budget = capped_powers(scenario)
    return tuple(int(slot_outcome(draw, scenario, alpha, budget, m).sum()) for m in modes)


def _chunks(n: int):
    full, rest = divmod(n, CHUNK)
    sizes = [CHUNK] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run(scenario, alpha, n, seed, modes, workers):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    jobs = [(scenario, alpha, seed, k, size, modes) for k, size in _chunks(n)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_counts, jobs))
    else:
        results = [_chunk_counts(j) for j in jobs]
    # integer sums: order of completion cannot matter
    return [sum(r[i] for r in results) for i in range(len(modes))]


def _estimate(outages: int, n: int, seed: int, mode) -> MonteCarloEstimate:
    p = outages / n
    return MonteCarloEstimate(p, n, math.sqrt(p * (1.0 - p) / n), seed, mode, outages)


def estimate_outage(
    scenario: Scenario,
    alpha: float,
    n: int,
    seed: int,
    mode: EHMode = EHMode.WITH_INTERFERENCE,
    workers: int = 1,
) -> MonteCarloEstimate:
    """Empirical secondary outage over ``n`` slots.

    When the primary constraint silences ST (P_Sm = 0) every slot is an
    outage and the estimate is exactly 1.
    """
    mode = EHMode(mode)
    if capped_powers(scenario).p_sm <= 0.0:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return _estimate(n, n, seed, mode)
    (count,) = _run(scenario, alpha, n, seed, (mode,), workers)
    return _estimate(count, n, seed, mode)


def compare_modes(
    scenario: Scenario, alpha: float, n: int, seed: int, workers: int = 1
) -> dict[EHMode, MonteCarloEstimate]:
    """Both harvest modes on the same channel draws (common random numbers)."""
    modes = (EHMode.WITH_INTERFERENCE, EHMode.WITHOUT_INTERFERENCE)
    if capped_powers(scenario).p_sm <= 0.0:
        return {m: _estimate(n, n, seed, m) for m in modes}
    counts = _run(scenario, alpha, n, seed, modes, workers)
    return {m: _estimate(c, n, seed, m) for m, c in zip(modes, counts)}


def estimate_primary_outage(scenario: Scenario, p_st: float, n: int, seed: int) -> MonteCarloEstimate:
    """Worst-link primary outage with ST at ``p_st``, from per-link draws."""
    z = zeta_p(scenario.rate_primary, scenario.bandwidth)
    count = 0
    for k, size in _chunks(n):
        draw = sample_channels(scenario, stream(seed, k), size)
        with np.errstate(divide="ignore"):
            sir = scenario.p_pt * draw.g_pp / (p_st * draw.g_sp)
        count += int((sir <= z).any(axis=1).sum())
    return _estimate(count, n, seed, None)
