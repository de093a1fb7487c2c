"""Special functions used by the closed-form outage expressions.

Only the parameter ranges the outage analysis needs are supported: integer
shapes for the incomplete gamma function, integer orders for Bessel K, and
Whittaker W parameters for which the Laplace-type integral representation
converges.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

# (n-1)! overflows a double past this
MAX_GAMMA_INT = 171

QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-30


class SpecFunResult(NamedTuple):
    value: float
    est_abs_error: float


def gamma_int(n: int) -> float:
    """Gamma function at a positive integer, (n-1)!."""
    n = _positive_int(n, "n")
    if n > MAX_GAMMA_INT:
        raise OverflowError(f"gamma_int({n}) overflows a double")
    return float(math.factorial(n - 1))


def lower_inc_gamma_int(n: int, x: float) -> float:
    """Lower incomplete gamma for integer shape, valid for any real x.

    Uses (n-1)! (1 - e^{-x} sum_{k<n} x^k/k!), which continues the integral
    to negative arguments.
    """
    n = _positive_int(n, "n")
    return gamma_int(n) * scaled_reg_lower_gamma(n, float(x), 0.0)


def scaled_reg_lower_gamma(n: int, x: float, log_scale: float) -> float:
    """Return exp(log_scale) * P(n, x), P the regularized lower incomplete gamma.

    The exponential prefactor is folded into the series so that products
    such as exp(-c) * P(n, x) with large negative x do not overflow.
    Near zero the tail series e^{-x} sum_{k>=n} x^k/k! is used; it has no
    cancellation there, unlike 1 - e^{-x} sum_{k<n} x^k/k!.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if x == 0.0:
        return 0.0
    if abs(x) < n + 1.0:
        return _tail_series(n, x, log_scale)
    # finite form: e^s - e^{s-x} sum_{k<n} x^k/k!
    term, acc = 1.0, 1.0
    for k in range(1, n):
        term *= x / k
        acc += term
    return math.exp(log_scale) - math.exp(log_scale - x) * acc


def _tail_series(n: int, x: float, log_scale: float) -> float:
    # x^n/n! * sum_{m>=0} x^m n!/(n+m)!
    lead = n * math.log(abs(x)) - math.lgamma(n + 1) + log_scale - x
    sign = -1.0 if (x < 0 and n % 2) else 1.0
    term, acc, m = 1.0, 1.0, 0
    while abs(term) > 1e-17 * abs(acc):
        m += 1
        term *= x / (n + m)
        acc += term
        if m > 10_000:
            raise RuntimeError("incomplete gamma tail series did not converge")
    return sign * math.exp(lead) * acc


def bessel_k(nu: int, z: float) -> float:
    """Modified Bessel function of the second kind K_nu(z), integer nu >= 0."""
    if nu < 0 or int(nu) != nu:
        raise ValueError(f"nu must be a nonnegative integer, got {nu}")
    if not z > 0:
        raise ValueError(f"bessel_k requires z > 0, got {z}")
    return float(special.kv(int(nu), z))


def whittaker_w(kappa: float, mu: float, z: float, full_output: bool = False):
    """Whittaker W_{kappa,mu}(z) for z > 0 and mu - kappa + 1/2 > 0.

    Evaluated from

        W = e^{-z/2} z^kappa / Gamma(mu-kappa+1/2)
            * int_0^inf e^{-s} s^{mu-kappa-1/2} (1 + s/z)^{mu+kappa-1/2} ds

    by adaptive quadrature. With ``full_output`` a :class:`SpecFunResult`
    carrying the quadrature error estimate is returned.
    """
    res = whittaker_w_scaled(kappa, mu, z, full_output=True)
    factor = math.exp(-z / 2.0)
    out = SpecFunResult(res.value * factor, res.est_abs_error * factor)
    return out if full_output else out.value


def whittaker_w_scaled(kappa: float, mu: float, z: float, full_output: bool = False):
    """e^{z/2} W_{kappa,mu}(z); stays finite for large z."""
    if not z > 0:
        raise ValueError(f"whittaker_w requires z > 0, got {z}")
    a = mu - kappa - 0.5
    b = mu + kappa - 0.5
    if not a > -1.0:
        raise ValueError(
            f"integral representation needs mu - kappa + 1/2 > 0 (kappa={kappa}, mu={mu})"
        )
    log_pref = kappa * math.log(z) - math.lgamma(a + 1.0)

    # s^a (1+s/z)^b e^{-s}, combined in log space
    def integrand(s):
        if s == 0.0:
            return 1.0 if a == 0 else 0.0
        return math.exp(a * math.log(s) + b * math.log1p(s / z) - s + log_pref)

    value, err = _quad_half_line(integrand, knee=z)
    out = SpecFunResult(value, err)
    return out if full_output else out.value


def _quad_half_line(f, knee: float):
    """Integrate f over [0, inf), splitting at a small-scale knee if present."""
    pieces = [0.0]
    if knee < 1.0:
        pieces.append(knee)
    pieces.append(1.0)
    total, err = 0.0, 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        v, e = integrate.quad(f, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
        total += v
        err += e
    v, e = integrate.quad(f, 1.0, np.inf, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
    return total + v, err + e


def _positive_int(n, name: str) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n}")
    return int(n)
