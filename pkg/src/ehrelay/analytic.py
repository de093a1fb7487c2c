"""Closed-form secondary outage probability.

Notation: with G1 = sum_i P_PT|h_{p_i r}|^2
(Gamma(L, A)), G2 = P_Sm|h_sr|^2 (Exp(C)), Z1 = sum_i P_PT|h_{p_i d}|^2
(Gamma(L, D)) and Z2 = 2 delta alpha |h_rd|^2/(1-alpha) (Exp(B)), the SR-SD
SIR is min(Z2 (G1+G2), P_R Z2/B lambda_rd ...)/Z1 and

    F_SD(xi) = I (1 - P_H1) + J P_H1,
    P_out    = F_SR + F_SD - F_SR F_SD.

``t = (1/A - 1/C)^-1`` is negative whenever C < A. Every expression below is
evaluated in real arithmetic with the incomplete gamma function continued
to negative arguments, so both signs go through the same code.

On the Gamma(L) factor: the double integral defining I carries a 1/Gamma(L)
from the Z1 density, while the closed form for I below does not. That is
consistent because I1 and I2 are each the corresponding double integral
divided by Gamma(L). The xi -> inf limit of I1 shows it: B C D^L / 2 here
against Gamma(L) B C D^L / 2 for the raw integral.
``tests/test_analytic.py`` pins this against brute-force double quadrature
for L = 1, 2, 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .power import capped_powers
from .scenario import Scenario
from .specfun import bessel_k, scaled_reg_lower_gamma, whittaker_w_scaled

# probabilities further than this outside [0, 1] mean a numerical bug
CONSISTENCY_TOL = 1e-9
# |1 - A/C| below this is treated as the removable t singularity
T_SINGULAR_RTOL = 1e-9
# below this |1 - A/C|, I is summed as a Gamma mixture instead (see term_i)
MIXTURE_MAX_R = 0.25


class AnalyticConsistencyError(ArithmeticError):
    """A closed-form probability landed outside [0, 1]."""


@dataclass(frozen=True)
class AnalyticTerms:
    a: float
    b: float
    c: float
    d: float
    t: float
    f: float
    theta: float
    xi_s: float
    p_r_star: float
    L: int
    p_r: float
    lambda_rd: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > 0 and self.d > 0):
            raise ValueError(f"A, B, C, D must be positive: {self}")
        # 1/C + 1/t = 1/A up to rounding in the subtraction forming t
        tol = max(1e-12, 8 * 2.2e-16 * self.a / self.c)
        if abs(self.theta * self.a - 1.0) > tol:
            raise AnalyticConsistencyError(f"theta*A = {self.theta * self.a}, expected 1")
        if abs(self.f**2 * self.b / self.theta - 1.0) > 1e-12:
            raise AnalyticConsistencyError("F^2 B != theta")


def xi_s(rate_s: float, bandwidth: float, L: int, alpha: float) -> float:
    """SIR threshold 2^(2 R_s/((1-alpha) B L)) - 1 for the secondary hops."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return math.expm1(math.log(2.0) * 2.0 * rate_s / ((1.0 - alpha) * bandwidth * L))


def make_terms(
    *,
    a: float,
    b: float,
    c: float,
    d: float,
    L: int,
    xi: float,
    p_r: float,
    lambda_rd: float,
    alpha: float,
    delta: float,
) -> AnalyticTerms:
    """Assemble the symbol bundle from the four Gamma/exponential scales."""
    if abs(1.0 - a / c) < T_SINGULAR_RTOL:
        c = a * (1.0 + T_SINGULAR_RTOL)
    t = 1.0 / (1.0 / a - 1.0 / c)
    theta = 1.0 / c + 1.0 / t
    f = math.sqrt(theta / b)
    p_r_star = (1.0 - alpha) * p_r / (2.0 * alpha * delta)
    return AnalyticTerms(
        a=a, b=b, c=c, d=d, t=t, f=f, theta=theta, xi_s=xi,
        p_r_star=p_r_star, L=int(L), p_r=p_r, lambda_rd=lambda_rd,
    )


@lru_cache(maxsize=4096)
def analytic_terms(scenario: Scenario, alpha: float) -> AnalyticTerms | None:
    """Terms for (scenario, alpha); ``None`` when ST is silenced (P_Sm = 0)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    budget = capped_powers(scenario)
    if budget.p_sm <= 0.0 or scenario.delta == 0.0:
        return None
    g = scenario.gains
    p_pt = scenario.p_pt
    return make_terms(
        a=p_pt * g.lambda_pr,
        b=2.0 * alpha * scenario.delta * g.lambda_rd / (1.0 - alpha),
        c=budget.p_sm * g.lambda_sr,
        d=p_pt * g.lambda_pd,
        L=scenario.L,
        xi=xi_s(scenario.rate_secondary, scenario.bandwidth, scenario.L, alpha),
        p_r=budget.p_r,
        lambda_rd=g.lambda_rd,
        alpha=alpha,
        delta=scenario.delta,
    )


def _gamma_ratio_cdf(x: float, L: int) -> float:
    # 1 - (1 + x)^-L
    return -math.expm1(-L * math.log1p(x))


def cdf_gamma_sr(xi: float, terms: AnalyticTerms) -> float:
    """CDF of the ST-SR SIR: exponential signal over Gamma(L) interference."""
    if xi < 0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    return _gamma_ratio_cdf(terms.a / terms.c * xi, terms.L)


def prob_h1(terms: AnalyticTerms) -> float:
    """P(G1 + G2 >= P_R*): the relay harvests more than its cap allows."""
    L, a, c, t = terms.L, terms.a, terms.c, terms.t
    p = terms.p_r_star
    if p == 0.0:
        return 1.0
    from_a = scaled_reg_lower_gamma(L, p / a, 0.0)
    # (t/A)^L e^{-P/C} P(L, P/t), with the exponential folded in
    from_t = (t / a) ** L * scaled_reg_lower_gamma(L, p / t, -p / c)
    return _checked(1.0 - from_a + from_t, "P_H1")


def term_i1(xi: float, terms: AnalyticTerms) -> float:
    if not xi > 0:
        raise ValueError(f"term_i1 needs xi > 0, got {xi}")
    L, b, c, d = terms.L, terms.b, terms.c, terms.d
    z = xi * d / (b * c)
    w = whittaker_w_scaled(-L, 0.5, z)
    return b * c * d**L / 2.0 * (1.0 - math.factorial(L) * w)


def term_i2(xi: float, terms: AnalyticTerms) -> float:
    if not xi > 0:
        raise ValueError(f"term_i2 needs xi > 0, got {xi}")
    L, b, d, t, f = terms.L, terms.b, terms.d, terms.t, terms.f
    y = xi * d * f**2
    total = 0.0
    for j in range(L):
        lead = (1.0 / (t * b * f)) ** j * xi ** ((j + 2) / 2.0) / math.factorial(j)
        first = math.factorial(j) * d**L * (f * math.sqrt(xi)) ** (-j - 2)
        w = whittaker_w_scaled(-(2 * L + j) / 2.0, (j + 1) / 2.0, y)
        second = math.factorial(L + j) / (xi * f**2) * d ** ((2 * L + j) / 2.0) * w
        total += lead * (first - second)
    return 0.5 * total


def term_i(xi: float, terms: AnalyticTerms) -> float:
    """P(Z2 (G1 + G2) / Z1 <= xi), the harvest-limited SR-SD outage."""
    if xi < 0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    if xi == 0.0:
        return 0.0
    r = 1.0 - terms.a / terms.c
    if abs(r) < MIXTURE_MAX_R:
        return _checked(_term_i_mixture(xi, terms, r), "I")
    L, a, b, c, d, t = terms.L, terms.a, terms.b, terms.c, terms.d, terms.t
    pref = 2.0 * (t / a) ** L / (b * c * d**L)
    return _checked(pref * (term_i1(xi, terms) - term_i2(xi, terms)), "I")


def _term_i_mixture(xi: float, terms: AnalyticTerms, r: float) -> float:
    # Near A = C the I1 - I2 difference cancels to ~|r|^L relative, so the
    # closed form loses everything. Instead write G1 + G2 as the mixture
    # sum_m (A/C) r^m Gamma(L+m+1, A), r = 1 - A/C, and sum the per-shape
    # CDFs P(Z2 Gamma(k, A)/Z1 <= xi), each a single Whittaker function.
    L, a, b, c, d = terms.L, terms.a, terms.b, terms.c, terms.d
    y = xi * d / (a * b)
    total, weight, m = 0.0, a / c, 0
    while True:
        k = L + m + 1
        term = weight * _shape_cdf(k, L, y)
        total += term
        weight *= r
        m += 1
        if abs(weight) < 1e-16 * abs(total) or m > 200:
            return total


def _shape_cdf(k: int, L: int, y: float) -> float:
    """P(E * G / Z1 <= xi) for E ~ Exp(B), G ~ Gamma(k, A), Z1 ~ Gamma(L, D).

    With y = xi D/(A B) this is 1 - Gamma(L+k)/Gamma(k) y^((k-1)/2)
    e^{y/2} W_{-(2L+k-1)/2, k/2}(y).
    """
    w = whittaker_w_scaled(-(2 * L + k - 1) / 2.0, k / 2.0, y)
    log_c = math.lgamma(L + k) - math.lgamma(k) + 0.5 * (k - 1) * math.log(y)
    return 1.0 - math.exp(log_c) * w


def cdf_gamma_sd(xi: float, terms: AnalyticTerms) -> float:
    if xi < 0:
        raise ValueError(f"xi must be nonnegative, got {xi}")
    if terms.p_r <= 0.0:
        return 1.0
    if xi == 0.0:
        return 0.0
    j = _gamma_ratio_cdf(terms.d / (terms.p_r * terms.lambda_rd) * xi, terms.L)
    ph1 = prob_h1(terms)
    return _checked(term_i(xi, terms) * (1.0 - ph1) + j * ph1, "F_SD")


def secondary_outage_analytic(scenario: Scenario, alpha: float) -> float:
    """Closed-form secondary outage at time-switching ratio ``alpha``.

    Returns 1 when the primary constraint silences ST (P_Sm = 0).

    The composition treats the two hops as independent and weights the
    unconditional I by P(H0). Both shortcuts understate outage when the
    relay seldom reaches its power cap, i.e. at small alpha, by up to about
    16% on the reference network. ``montecarlo.estimate_outage`` has no
    such approximation.
    """
    terms = analytic_terms(scenario, alpha)
    if terms is None:
        return 1.0
    f_sr = cdf_gamma_sr(terms.xi_s, terms)
    f_sd = cdf_gamma_sd(terms.xi_s, terms)
    return _checked(f_sr + f_sd - f_sr * f_sd, "P_out")


def pdf_z(z: float, terms: AnalyticTerms) -> float:
    """Density of G1 + G2 (Gamma(L, A) plus Exp(C))."""
    if z < 0:
        return 0.0
    if z == 0.0:
        return 0.0
    L, a, c, t = terms.L, terms.a, terms.c, terms.t
    return (t / a) ** L / c * scaled_reg_lower_gamma(L, z / t, -z / c)


def pdf_q(q: float, terms: AnalyticTerms) -> float:
    """Density of Z2 (G1 + G2)."""
    if q <= 0:
        return 0.0
    L, a, b, c, t, theta = terms.L, terms.a, terms.b, terms.c, terms.t, terms.theta
    bracket = bessel_k(0, 2.0 * math.sqrt(q / (b * c)))
    arg = 2.0 * math.sqrt(q * theta / b)
    for j in range(L):
        bracket -= (b * theta) ** (-j / 2.0) * q ** (j / 2.0) / (t**j * math.factorial(j)) * bessel_k(j, arg)
    return 2.0 * (t / a) ** L / (b * c) * bracket


def _checked(p: float, name: str) -> float:
    if not (-CONSISTENCY_TOL <= p <= 1.0 + CONSISTENCY_TOL) or math.isnan(p):
        raise AnalyticConsistencyError(f"{name} = {p!r} is not a probability")
    return min(max(p, 0.0), 1.0)
