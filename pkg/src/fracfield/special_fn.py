"""Real-line evaluation of Gamma, erfc, Mittag-Leffler and Mainardi functions.

The one- and two-parameter Mittag-Leffler functions are evaluated on the
negative real axis by a three-branch scheme:

* power series near the origin (with a cancellation-aware radius),
* for order alpha in (0,1): a completely monotone spectral integral
      E_alpha(-x) = int_0^inf exp(-x r) K_alpha(r) dr
  whose integrand is strictly positive, so the evaluation is free of the
  catastrophic cancellation that kills the series at moderate arguments,
* for order alpha in (1,2): the standard signed oscillatory-exponential
  leading term plus an optimally truncated algebraic tail.

All functions are pure and deterministic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .errors import DomainError, NoConvergenceError, UnsupportedOrderError

__all__ = [
    "MLOrder",
    "EvalPolicy",
    "ZeroList",
    "DEFAULT_POLICY",
    "gamma_fn",
    "erfc",
    "kappa_alpha",
    "ml_series",
    "ml_asymptotic_neg",
    "ml_eval",
    "ml_bounds",
    "ml_bounds_two",
    "ml_dominant_identity_residual",
    "ml_real_zeros",
    "mainardi_series",
    "mainardi_half_closed",
]


@dataclass(frozen=True)
class MLOrder:
    """Order pair (alpha, beta) of the two-parameter Mittag-Leffler function."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"MLOrder requires alpha, beta > 0, got {self}")


@dataclass(frozen=True)
class EvalPolicy:
    """Precision contract for series/asymptotic special-function evaluation."""

    rel_tol: float = 1e-12
    max_terms: int = 500
    asymptotic_switch: float = 50.0

    def __post_init__(self):
        if not (0 < self.rel_tol < 1):
            raise DomainError("rel_tol must lie in (0, 1)")
        if self.max_terms < 10:
            raise DomainError("max_terms must be >= 10")
        if self.asymptotic_switch <= 1:
            raise DomainError("asymptotic_switch must exceed 1")


DEFAULT_POLICY = EvalPolicy()


@dataclass(frozen=True)
class ZeroList:
    """Real zeros of E_alpha found on a search interval [x_min, 0]."""

    alpha: float
    zeros: tuple
    search_interval: tuple

    def __len__(self):
        return len(self.zeros)


def gamma_fn(x: float) -> float:
    """Gamma function on the real line, rejecting the poles at 0, -1, -2, ..."""
    xf = float(x)
    if xf <= 0 and xf == math.floor(xf):
        raise DomainError(f"gamma_fn pole at non-positive integer x={xf}")
    return float(special.gamma(xf))


def erfc(x):
    """Complementary error function, (2/sqrt(pi)) int_x^inf exp(-t^2) dt."""
    return special.erfc(x)


def kappa_alpha(alpha: float) -> float:
    """sin(pi*alpha) * Gamma(1+alpha) / pi; changes sign at alpha = 1."""
    if not (0 < alpha < 2):
        raise DomainError(f"kappa_alpha requires alpha in (0,2), got {alpha}")
    return math.sin(math.pi * alpha) * float(special.gamma(1 + alpha)) / math.pi


# ---------------------------------------------------------------------------
# series branch


def _series_radius(alpha: float, beta: float, policy: EvalPolicy) -> float:
    """Largest |z| at which the power series is trusted.

    Two constraints: the terms must drop below tolerance well within
    max_terms, and the peak term exp(|z|^(1/alpha)) must stay small enough
    that cancellation on the negative axis cannot eat the result.
    """
    k0 = max(policy.max_terms - 100, 50)
    conv = 0.75 * math.exp(special.gammaln(alpha * k0 + beta) / k0)
    cancel = 16.1**alpha if alpha < 1 else math.inf
    return min(policy.asymptotic_switch, conv, cancel)


def ml_series(order: MLOrder, z: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """Partial sum of sum_k z^k / Gamma(alpha k + beta).

    Stops once three consecutive terms fall below rel_tol times the running
    sum (guards alternating near-cancellation); raises NoConvergenceError if
    max_terms is exhausted first.
    """
    alpha, beta = order.alpha, order.beta
    acc = 0.0
    term = None
    power = 1.0
    small_streak = 0
    for k in range(policy.max_terms):
        term = power * float(special.rgamma(alpha * k + beta))
        acc += term
        if abs(term) <= policy.rel_tol * max(abs(acc), 1e-300):
            small_streak += 1
            if small_streak >= 3:
                return acc
        else:
            small_streak = 0
        power *= z
        if not math.isfinite(power):
            break
    raise NoConvergenceError(
        f"Mittag-Leffler series did not converge for alpha={alpha}, beta={beta}, z={z}"
    )


def _series_neg_vec(alpha, beta, x, policy):
    """Vectorised series for E_{alpha,beta}(-x), x >= 0 (callers check radius)."""
    x = np.asarray(x, dtype=float)
    rg = special.rgamma(alpha * np.arange(policy.max_terms) + beta)
    acc = np.zeros_like(x)
    power = np.ones_like(x)
    streak = 0
    for k in range(policy.max_terms):
        term = power * rg[k]
        acc += term
        if np.all(np.abs(term) <= policy.rel_tol * np.maximum(np.abs(acc), 1e-300)):
            streak += 1
            if streak >= 3:
                return acc
        else:
            streak = 0
        power *= -x
    raise NoConvergenceError(
        f"vector Mittag-Leffler series did not converge (alpha={alpha}, beta={beta}, "
        f"max |x|={x.max() if x.size else 0})"
    )


# ---------------------------------------------------------------------------
# spectral-integral branch (0 < alpha < 1, negative axis)

_SPECTRAL_CHUNK = 4096


@functools.lru_cache(maxsize=8)
def _spectral_grid(alpha):
    # The double-exponential cutoff exp(-exp((log x + s)/alpha)) switches on
    # over a width ~alpha in s, so the trapezoid step must resolve that scale.
    h = min(0.05, alpha / 8.0)
    return np.arange(-44.0, 44.0 + 1e-9, h)


def _spectral_neg(alpha, beta_is_alpha, x):
    """E_alpha(-x) or E_{alpha,alpha}(-x) via the monotone spectral integral.

    With q = r^alpha and q = e^s the representation becomes a trapezoid sum
    over s of a smooth, exponentially decaying, strictly positive integrand:
    no cancellation at any argument size.
    """
    x = np.asarray(x, dtype=float)
    s = _spectral_grid(alpha)
    q = np.exp(s)
    cos_pa = math.cos(math.pi * alpha)
    denom = q * q + 2.0 * cos_pa * q + 1.0
    # log of the x-independent part of the integrand, including the dq = q ds factor
    if beta_is_alpha:
        base = (1.0 + 1.0 / alpha) * s - np.log(denom)
    else:
        base = s - np.log(denom)
    prefactor = math.sin(math.pi * alpha) / (alpha * math.pi)
    out = np.empty_like(x)
    flat = x.ravel()
    res = out.ravel()
    h = s[1] - s[0]
    for lo in range(0, flat.size, _SPECTRAL_CHUNK):
        xs = flat[lo : lo + _SPECTRAL_CHUNK]
        logx = np.log(xs)[:, None]
        with np.errstate(over="ignore", invalid="ignore"):
            expo = base[None, :] - np.exp((logx + s[None, :]) / alpha)
            if beta_is_alpha:
                expo = expo + ((1.0 - alpha) / alpha) * logx
        expo = np.where(np.isnan(expo), -np.inf, expo)
        res[lo : lo + _SPECTRAL_CHUNK] = prefactor * h * np.exp(expo).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# oscillatory + algebraic branch (1 < alpha < 2, negative axis)

_ALG_TERMS = 10


def _osc_alg_neg(alpha, beta, x):
    """E_{alpha,beta}(-x) for 1 < alpha < 2, beta in {1, alpha}, large x > 0.

    Signed oscillatory-exponential pair plus the algebraic expansion
    sum_j (-1)^(j+1) x^(-j) / Gamma(beta - alpha j), truncated at the
    smallest term (the expansion is asymptotic, not convergent).
    """
    x = np.asarray(x, dtype=float)
    j = np.arange(1, _ALG_TERMS + 1)
    coeff = ((-1.0) ** (j + 1)) * special.rgamma(beta - alpha * j)
    with np.errstate(divide="ignore"):
        terms = coeff[:, None] * x[None, :] ** (-j[:, None])
    mags = np.abs(terms)
    mags[mags == 0.0] = np.inf  # rgamma poles contribute nothing; never truncate there
    jstar = np.argmin(mags, axis=0)
    mask = np.arange(_ALG_TERMS)[:, None] <= jstar[None, :]
    alg = np.where(mask, terms, 0.0).sum(axis=0)

    w = x ** (1.0 / alpha)
    damp = np.exp(w * math.cos(math.pi / alpha))
    phase = w * math.sin(math.pi / alpha)
    if beta == 1.0:
        osc = (2.0 / alpha) * damp * np.cos(phase)
    else:  # beta == alpha
        shift = math.pi * (1.0 - alpha) / alpha
        osc = (2.0 / alpha) * x ** ((1.0 - alpha) / alpha) * damp * np.cos(phase + shift)
    return osc + alg


# ---------------------------------------------------------------------------
# dispatcher

_BETA_TOL = 1e-12


def _ml_neg(alpha, beta, x, policy):
    """E_{alpha,beta}(-x) for array x >= 0."""
    x = np.asarray(x, dtype=float)
    if alpha == 1.0 and beta == 1.0:
        return np.exp(-x)
    if alpha == 2.0 and beta == 1.0:
        return np.cos(np.sqrt(x))

    beta_is_one = abs(beta - 1.0) <= _BETA_TOL
    beta_is_alpha = abs(beta - alpha) <= _BETA_TOL
    beta_is_alpha_p1 = abs(beta - (alpha + 1.0)) <= _BETA_TOL

    radius = _series_radius(alpha, beta, policy)
    out = np.empty_like(x)
    near = x <= radius
    if near.any():
        out[near] = _series_neg_vec(alpha, beta, x[near], policy)
    far = ~near
    if not far.any():
        return out

    xf = x[far]
    if beta_is_alpha_p1:
        # E_{a,a+1}(-x) = (1 - E_a(-x)) / x
        out[far] = (1.0 - _ml_neg(alpha, 1.0, xf, policy)) / xf
    elif 0 < alpha < 1 and (beta_is_one or beta_is_alpha):
        out[far] = _spectral_neg(alpha, beta_is_alpha, xf)
    elif 1 < alpha < 2 and (beta_is_one or beta_is_alpha):
        small = xf <= policy.asymptotic_switch
        vals = np.empty_like(xf)
        if small.any():
            vals[small] = _series_neg_vec(alpha, beta, xf[small], policy)
        if (~small).any():
            vals[~small] = _osc_alg_neg(alpha, 1.0 if beta_is_one else alpha, xf[~small])
        out[far] = vals
    else:
        raise UnsupportedOrderError(
            f"E_({alpha},{beta})(-x) unsupported for |x| > {radius:.3g}; "
            "only beta in {1, alpha, alpha+1} reaches beyond the series radius"
        )
    return out


def ml_eval(order: MLOrder, x, policy: EvalPolicy = DEFAULT_POLICY):
    """Evaluate E_{alpha,beta}(x) on the real line (scalar or array).

    Negative arguments of any magnitude are supported for
    beta in {1, alpha, alpha+1}; elsewhere the power series must converge.
    alpha=1 short-circuits to exp, alpha=2 (beta=1) to cosh/cos.
    """
    alpha, beta = order.alpha, order.beta
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    out = np.empty_like(arr)
    neg = arr < 0
    if neg.any():
        out[neg] = _ml_neg(alpha, beta, -arr[neg], policy)
    pos = ~neg
    if pos.any():
        if alpha == 1.0 and beta == 1.0:
            out[pos] = np.exp(arr[pos])
        elif alpha == 2.0 and beta == 1.0:
            out[pos] = np.cosh(np.sqrt(arr[pos]))
        else:
            out[pos] = [ml_series(order, float(z), policy) for z in arr[pos]]
    return float(out[0]) if scalar else out


def ml_asymptotic_neg(order: MLOrder, x: float) -> float:
    """Leading large-argument term of E_{alpha,beta}(-x), beta in {1, alpha}.

    For 0 < alpha < 1 the algebraic leading term; for 1 < alpha < 2 the
    signed oscillatory-exponential leading term. alpha = 1 is rejected
    (Gamma(1-alpha) pole); callers route it to exp.
    """
    alpha, beta = order.alpha, order.beta
    beta_is_one = abs(beta - 1.0) <= _BETA_TOL
    beta_is_alpha = abs(beta - alpha) <= _BETA_TOL
    if not (beta_is_one or beta_is_alpha):
        raise UnsupportedOrderError("asymptotics only for beta in {1, alpha}")
    if alpha == 1.0:
        raise DomainError("alpha=1 has no algebraic asymptotic; use exp directly")
    if x <= 0:
        raise DomainError("ml_asymptotic_neg expects large positive x (argument -x)")
    if 0 < alpha < 1:
        if beta_is_one:
            return float(special.rgamma(1.0 - alpha)) / x
        # two-parameter tail constant: kappa_alpha, the coefficient consistent
        # with both the exact erfc reduction at alpha=1/2 and the sharp bounds
        return kappa_alpha(alpha) / (x * x)
    if 1 < alpha < 2:
        w = x ** (1.0 / alpha)
        damp = math.exp(w * math.cos(math.pi / alpha))
        phase = w * math.sin(math.pi / alpha)
        if beta_is_one:
            return (2.0 / alpha) * damp * math.cos(phase)
        shift = math.pi * (1.0 - alpha) / alpha
        return (2.0 / alpha) * x ** ((1.0 - alpha) / alpha) * damp * math.cos(phase + shift)
    raise DomainError(f"alpha={alpha} outside (0,2)")


def ml_bounds(alpha: float, x):
    """Two-sided sharp bracket for E_alpha(-x), 0 < alpha < 1, x >= 0."""
    if not (0 < alpha < 1):
        raise DomainError(f"ml_bounds requires alpha in (0,1), got {alpha}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("ml_bounds requires x >= 0")
    lower = 1.0 / (1.0 + float(special.gamma(1.0 - alpha)) * x)
    upper = 1.0 / (1.0 + x / float(special.gamma(1.0 + alpha)))
    return lower, upper


def ml_bounds_two(alpha: float, x, beta: float | None = None):
    """Sharp bracket for Gamma(beta) * E_{alpha,beta}(-x).

    beta=None means beta=alpha (squared-denominator bracket); beta > alpha
    uses the first-order bracket.
    """
    if not (0 < alpha < 1):
        raise DomainError(f"ml_bounds_two requires alpha in (0,1), got {alpha}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("ml_bounds_two requires x >= 0")
    if beta is None:
        g1m, g1p, g2p = (float(special.gamma(v)) for v in (1 - alpha, 1 + alpha, 1 + 2 * alpha))
        lower = 1.0 / (1.0 + math.sqrt(g1m / g1p) * x) ** 2
        upper = 1.0 / (1.0 + math.sqrt(g1p / g2p) * x) ** 2
        return lower, upper
    if not beta > alpha:
        raise DomainError("the beta-variant bracket requires beta > alpha")
    gb, gbm, gbp = (float(special.gamma(v)) for v in (beta, beta - alpha, beta + alpha))
    lower = 1.0 / (1.0 + (gbm / gb) * x)
    upper = 1.0 / (1.0 + (gb / gbp) * x)
    return lower, upper


def ml_dominant_identity_residual(
    alpha: float, z: float, policy: EvalPolicy = DEFAULT_POLICY
) -> float:
    """alpha*z*E_alpha(z) - (z*exp(z^(1/alpha)) - kappa_alpha).

    z^(1/alpha) is taken on the principal branch; the real part of the
    residual is returned. The identity is O(1/z) on the positive axis and,
    for negative z, only where cos(pi/alpha) < 0 (alpha in (2/3, 2)).
    """
    e_ml = ml_eval(MLOrder(alpha, 1.0), z, policy)
    zc = complex(z)
    e_alpha = zc * np.exp(zc ** (1.0 / alpha)) - kappa_alpha(alpha)
    return float((alpha * z * e_ml - e_alpha).real)


def ml_real_zeros(
    alpha: float,
    x_min: float,
    zero_tol: float = 1e-10,
    scan_step: float = 0.05,
    policy: EvalPolicy = DEFAULT_POLICY,
) -> ZeroList:
    """Locate all real zeros of E_alpha on [x_min, 0] by scan plus bisection.

    Completely monotone orders alpha <= 1 return an empty list without
    scanning. Zeros are refined until |E_alpha| <= zero_tol (or the bracket
    collapses to machine width).
    """
    if x_min >= 0:
        raise DomainError("x_min must be negative")
    if alpha <= 1.0:
        return ZeroList(alpha, (), (x_min, 0.0))
    if alpha > 2.0:
        raise DomainError("zero finding supported for alpha in (1, 2] only")

    order = MLOrder(alpha, 1.0)
    grid = np.arange(x_min, 0.0, scan_step)
    if grid[-1] < -scan_step / 2:
        grid = np.append(grid, -scan_step / 2)
    vals = ml_eval(order, grid, policy)

    def f(z):
        return ml_eval(order, float(z), policy)

    zeros = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            zeros.append(float(a))
            continue
        if fa * fb < 0:
            root = optimize.brentq(f, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps)
            if abs(f(root)) <= max(zero_tol, 1e-9 * abs(fa - fb)):
                zeros.append(float(root))
    return ZeroList(alpha, tuple(sorted(zeros)), (x_min, 0.0))


def mainardi_series(alpha: float, u: float, policy: EvalPolicy = DEFAULT_POLICY) -> float:
    """sum_n (-1)^n u^(2n) / ((2n)! Gamma(alpha n - alpha + 1)).

    For alpha in (0,1) the Gamma argument alpha(n-1)+1 is never a
    non-positive integer, so each term is well defined.
    """
    if not (0 < alpha < 1):
        raise DomainError(f"mainardi_series requires alpha in (0,1), got {alpha}")
    if u < 0:
        raise DomainError("mainardi_series requires u >= 0")
    acc = 0.0
    power = 1.0  # u^(2n) / (2n)!
    streak = 0
    for n in range(policy.max_terms):
        term = power * float(special.rgamma(alpha * n - alpha + 1.0))
        if n % 2 == 1:
            term = -term
        acc += term
        if abs(term) <= policy.rel_tol * max(abs(acc), 1e-300):
            streak += 1
            if streak >= 3:
                return acc
        else:
            streak = 0
        power *= u * u / ((2 * n + 1) * (2 * n + 2))
    raise NoConvergenceError(f"Mainardi series did not converge at alpha={alpha}, u={u}")


def mainardi_half_closed(u) -> float:
    """Closed form (1+u) exp(-u^2/4) / sqrt(pi) for the order-1/2 kernel."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("mainardi_half_closed requires u >= 0")
    out = (1.0 + u) * np.exp(-u * u / 4.0) / math.sqrt(math.pi)
    return float(out) if out.ndim == 0 else out
