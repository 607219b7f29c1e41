"""Hot numeric kernels: numba-jitted loops with pure-numpy fallbacks.

Every kernel exists in two variants, ``*_numba`` and ``*_numpy``, computing
identical numbers. The module-level dispatch picks the jitted variant unless
numba is unavailable or the environment variable ``BUBBLEFTS_DISABLE_NUMBA``
is set to 1/true/yes. ``benchmarks/bench_kernels.py`` times both variants.

The grid kernels exploit that both critical-time transforms are affine in a
single scale parameter once the exponent(s) are fixed:

    model 1:  T(t) = c1 * p(t)^(-1/beta) + t
    model 2:  T(t) = lam * (A - ln p(t))^(1/(1-beta)) + t,   lam = B^(-1/(1-beta))

so for the de-meaned series x = lam*u + v (u: centered transform component,
v: centered time ramp) every Dickey-Fuller sum is a quadratic polynomial in
lam. The per-window cost drops from O(n_scale * n_obs) to O(n_obs + n_scale)
for each exponent, with results identical to the direct per-point regression.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("BUBBLEFTS_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in ("1", "true", "yes")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by BUBBLEFTS_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # no-op decorator stand-in
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# --------------------------------------------------------------------------
# Dickey-Fuller t statistic for one series (no intercept, no lags)
# --------------------------------------------------------------------------

def df_sums_numpy(x: np.ndarray) -> tuple[float, float, float]:
    """Return (Sxx, Sxd, Sdd): regression sums of the DF OLS on x."""
    xl = x[:-1]
    d = x[1:] - x[:-1]
    return float(xl @ xl), float(xl @ d), float(d @ d)


@njit(cache=True)
def df_sums_numba(x):
    sxx = 0.0
    sxd = 0.0
    sdd = 0.0
    for k in range(1, x.shape[0]):
        xl = x[k - 1]
        d = x[k] - x[k - 1]
        sxx += xl * xl
        sxd += xl * d
        sdd += d * d
    return sxx, sxd, sdd


def tstat_from_sums(sxx: float, sxd: float, sdd: float, n_obs: int) -> float:
    """t = rho/se from the three regression sums; nan when degenerate."""
    if sxx <= 0.0 or n_obs < 2:
        return math.nan
    ssr = sdd - sxd * sxd / sxx
    if ssr <= 0.0:
        return math.nan
    return sxd * math.sqrt((n_obs - 1) / (sxx * ssr))


# --------------------------------------------------------------------------
# Null distribution: DF t statistics of simulated driftless random walks
# --------------------------------------------------------------------------

def null_tstats_numpy(z: np.ndarray) -> np.ndarray:
    """DF t stats, one per row of standard-normal increments z (reps, length)."""
    x = np.cumsum(z, axis=1)
    xl = x[:, :-1]
    d = z[:, 1:]
    sxx = np.einsum("ij,ij->i", xl, xl)
    sxd = np.einsum("ij,ij->i", xl, d)
    sdd = np.einsum("ij,ij->i", d, d)
    n1 = z.shape[1] - 1
    ssr = sdd - sxd * sxd / sxx
    with np.errstate(invalid="ignore", divide="ignore"):
        t = sxd * np.sqrt((n1 - 1) / (sxx * ssr))
    return t


@njit(cache=True)
def null_tstats_numba(z):
    reps, length = z.shape
    out = np.empty(reps)
    for i in range(reps):
        xprev = z[i, 0]
        sxx = 0.0
        sxd = 0.0
        sdd = 0.0
        for k in range(1, length):
            d = z[i, k]
            sxx += xprev * xprev
            sxd += xprev * d
            sdd += d * d
            xprev += d
        n1 = length - 1
        ssr = sdd - sxd * sxd / sxx
        if sxx <= 0.0 or ssr <= 0.0:
            out[i] = np.nan
        else:
            out[i] = sxd * math.sqrt((n1 - 1) / (sxx * ssr))
    return out


# --------------------------------------------------------------------------
# Affine DF grid: t stat and residual variance of x = lam*u + v per lam
# --------------------------------------------------------------------------

def _affine_base_sums(u: np.ndarray, v: np.ndarray):
    """Quadratic-coefficient sums for the DF regression of lam*u + v.

    u and v must already be centered over the full window; v has unit step
    so the differenced series is lam*du + 1.
    """
    n = u.shape[0]
    ul = u[:-1]
    vl = v[:-1]
    du = u[1:] - u[:-1]
    a1 = float(ul @ ul)
    a2 = float(ul @ vl)
    a3 = float(vl @ vl)
    c1 = float(ul @ du)
    c2 = float(np.sum(ul))
    c3 = float(vl @ du)
    c4 = float(np.sum(vl))
    d1 = float(du @ du)
    d2 = float(np.sum(du))
    f1 = float(u @ u)
    f2 = float(u @ v)
    f3 = float(v @ v)
    return n, a1, a2, a3, c1, c2, c3, c4, d1, d2, f1, f2, f3


def affine_df_grid_numpy(u: np.ndarray, v: np.ndarray, lam: np.ndarray):
    """(t_stat, residual variance) arrays over the lam grid, numpy path."""
    n, a1, a2, a3, c1, c2, c3, c4, d1, d2, f1, f2, f3 = _affine_base_sums(u, v)
    n1 = n - 1
    sxx = lam * lam * a1 + 2.0 * lam * a2 + a3
    sxd = lam * lam * c1 + lam * (c2 + c3) + c4
    sdd = lam * lam * d1 + 2.0 * lam * d2 + n1
    with np.errstate(invalid="ignore", divide="ignore"):
        ssr = sdd - sxd * sxd / sxx
        t = sxd * np.sqrt((n1 - 1) / (sxx * ssr))
        var = (lam * lam * f1 + 2.0 * lam * f2 + f3) / n
    bad = (sxx <= 0.0) | (ssr <= 0.0)
    t = np.where(bad, np.nan, t)
    return t, var


@njit(cache=True)
def _affine_df_grid_core(u, v, lam, t_out, var_out):
    n = u.shape[0]
    a1 = a2 = a3 = 0.0
    c1 = c2 = c3 = c4 = 0.0
    d1 = d2 = 0.0
    f1 = f2 = f3 = 0.0
    for j in range(n):
        f1 += u[j] * u[j]
        f2 += u[j] * v[j]
        f3 += v[j] * v[j]
    for j in range(n - 1):
        du = u[j + 1] - u[j]
        a1 += u[j] * u[j]
        a2 += u[j] * v[j]
        a3 += v[j] * v[j]
        c1 += u[j] * du
        c2 += u[j]
        c3 += v[j] * du
        c4 += v[j]
        d1 += du * du
        d2 += du
    n1 = n - 1
    for i in range(lam.shape[0]):
        la = lam[i]
        sxx = la * la * a1 + 2.0 * la * a2 + a3
        sxd = la * la * c1 + la * (c2 + c3) + c4
        sdd = la * la * d1 + 2.0 * la * d2 + n1
        var_out[i] = (la * la * f1 + 2.0 * la * f2 + f3) / n
        if sxx <= 0.0:
            t_out[i] = np.nan
            continue
        ssr = sdd - sxd * sxd / sxx
        if ssr <= 0.0:
            t_out[i] = np.nan
        else:
            t_out[i] = sxd * math.sqrt((n1 - 1) / (sxx * ssr))


def affine_df_grid_numba(u, v, lam):
    t = np.empty(lam.shape[0])
    var = np.empty(lam.shape[0])
    _affine_df_grid_core(u, v, lam, t, var)
    return t, var


# --------------------------------------------------------------------------
# Whole-window grid scans (model 1: beta x scale, model 2: A x beta x scale)
# --------------------------------------------------------------------------

def _center(a: np.ndarray) -> np.ndarray:
    return a - a.mean()


def model1_window_scan_numpy(prices, beta_grid, h_grid):
    """t-stat / variance / mean-horizon over the (beta, scale) grid.

    The scale grid is anchored per beta so that mean(c1 * p^(-1/beta))
    equals each target horizon h in h_grid; c1 values are returned so the
    winning point can be reported.
    """
    n = prices.shape[0]
    nb, nh = beta_grid.shape[0], h_grid.shape[0]
    v = np.arange(n, dtype=np.float64)
    v = v - v.mean()
    t = np.full((nb, nh), np.nan)
    var = np.full((nb, nh), np.nan)
    c1 = np.full((nb, nh), np.nan)
    for bi in range(nb):
        q = prices ** (-1.0 / beta_grid[bi])
        qm = q.mean()
        if not np.isfinite(qm) or qm <= 0.0:
            continue
        lam = h_grid / qm
        u = q - qm
        t[bi], var[bi] = affine_df_grid_numpy(u, v, lam)
        c1[bi] = lam
    return t, var, c1


@njit(cache=True)
def model1_window_scan_numba(prices, beta_grid, h_grid):
    n = prices.shape[0]
    nb = beta_grid.shape[0]
    nh = h_grid.shape[0]
    t = np.full((nb, nh), np.nan)
    var = np.full((nb, nh), np.nan)
    c1 = np.full((nb, nh), np.nan)
    v = np.empty(n)
    tbar = (n - 1) / 2.0
    for j in range(n):
        v[j] = j - tbar
    q = np.empty(n)
    u = np.empty(n)
    lam = np.empty(nh)
    for bi in range(nb):
        inv_beta = -1.0 / beta_grid[bi]
        qm = 0.0
        for j in range(n):
            q[j] = prices[j] ** inv_beta
            qm += q[j]
        qm /= n
        if not np.isfinite(qm) or qm <= 0.0:
            continue
        for j in range(n):
            u[j] = q[j] - qm
        for i in range(nh):
            lam[i] = h_grid[i] / qm
            c1[bi, i] = lam[i]
        _affine_df_grid_core(u, v, lam, t[bi], var[bi])
    return t, var, c1


def model2_window_scan_numpy(log_prices, a_grid, beta_grid, h_grid):
    """t-stat / variance / scale over the (A, beta, scale) grid for model 2.

    lam = B^(-1/(1-beta)) is anchored per (A, beta) so that
    mean(lam * (A - ln p)^(1/(1-beta))) equals each horizon in h_grid.
    Returns lam so B can be recovered as lam^(-(1-beta)).
    """
    n = log_prices.shape[0]
    na, nb, nh = a_grid.shape[0], beta_grid.shape[0], h_grid.shape[0]
    v = np.arange(n, dtype=np.float64)
    v = v - v.mean()
    t = np.full((na, nb, nh), np.nan)
    var = np.full((na, nb, nh), np.nan)
    lam_out = np.full((na, nb, nh), np.nan)
    for ai in range(na):
        gap = a_grid[ai] - log_prices
        if np.any(gap < 0.0):
            continue
        for bi in range(nb):
            e = 1.0 / (1.0 - beta_grid[bi])
            w = gap ** e
            wm = w.mean()
            if not np.isfinite(wm) or wm <= 0.0:
                continue
            lam = h_grid / wm
            u = w - wm
            t[ai, bi], var[ai, bi] = affine_df_grid_numpy(u, v, lam)
            lam_out[ai, bi] = lam
    return t, var, lam_out


@njit(cache=True)
def model2_window_scan_numba(log_prices, a_grid, beta_grid, h_grid):
    n = log_prices.shape[0]
    na = a_grid.shape[0]
    nb = beta_grid.shape[0]
    nh = h_grid.shape[0]
    t = np.full((na, nb, nh), np.nan)
    var = np.full((na, nb, nh), np.nan)
    lam_out = np.full((na, nb, nh), np.nan)
    v = np.empty(n)
    tbar = (n - 1) / 2.0
    for j in range(n):
        v[j] = j - tbar
    w = np.empty(n)
    u = np.empty(n)
    lam = np.empty(nh)
    for ai in range(na):
        ok = True
        for j in range(n):
            if a_grid[ai] < log_prices[j]:
                ok = False
                break
        if not ok:
            continue
        for bi in range(nb):
            e = 1.0 / (1.0 - beta_grid[bi])
            wm = 0.0
            for j in range(n):
                w[j] = (a_grid[ai] - log_prices[j]) ** e
                wm += w[j]
            wm /= n
            if not np.isfinite(wm) or wm <= 0.0:
                continue
            for j in range(n):
                u[j] = w[j] - wm
            for i in range(nh):
                lam[i] = h_grid[i] / wm
                lam_out[ai, bi, i] = lam[i]
            _affine_df_grid_core(u, v, lam, t[ai, bi], var[ai, bi])
    return t, var, lam_out


# --------------------------------------------------------------------------
# Euler-Maruyama steppers (shared Wiener increments across state and tc)
# --------------------------------------------------------------------------

OK = 0
HALT_OVERFLOW = 1
HALT_SINGULARITY = 2


def euler_ou_numpy(tc0, alpha, noise_scale, dt, dw):
    n = dw.shape[0]
    tc = np.empty(n + 1)
    tc[0] = tc0
    cur = tc0
    # sequential linear recursion; kept as a loop for exact parity with
    # the jitted path
    for k in range(n):
        cur = cur - alpha * cur * dt + noise_scale * dw[k]
        tc[k + 1] = cur
    return tc


@njit(cache=True)
def euler_ou_numba(tc0, alpha, noise_scale, dt, dw):
    n = dw.shape[0]
    tc = np.empty(n + 1)
    tc[0] = tc0
    for k in range(n):
        tc[k + 1] = tc[k] - alpha * tc[k] * dt + noise_scale * dw[k]
    return tc


@njit(cache=True)
def euler_model1_numba(p0, tc0, mu, m, sigma, alpha, noise_scale, dt, dw,
                       p_cap, t_sing):
    n = dw.shape[0]
    p = np.empty(n + 1)
    tc = np.empty(n + 1)
    p[0] = p0
    tc[0] = tc0
    status = OK
    done = n
    for k in range(n):
        pk = p[k]
        pm1 = pk ** (m - 1.0)
        pm = pm1 * pk
        delta = alpha * tc[k] + 0.5 * m * mu * sigma * sigma * pm1
        p[k + 1] = pk + mu * pm * (1.0 + delta) * dt + sigma * pm * dw[k]
        tc[k + 1] = tc[k] - alpha * tc[k] * dt + noise_scale * dw[k]
        if not (p[k + 1] > 0.0) or p[k + 1] > p_cap:
            status = HALT_OVERFLOW
            done = k + 1
            break
        if (k + 1) * dt >= t_sing + tc[k + 1]:
            status = HALT_SINGULARITY
            done = k + 1
            break
    return p, tc, done, status


def euler_model1_numpy(p0, tc0, mu, m, sigma, alpha, noise_scale, dt, dw,
                       p_cap, t_sing):
    n = dw.shape[0]
    p = np.empty(n + 1)
    tc = np.empty(n + 1)
    p[0] = p0
    tc[0] = tc0
    status = OK
    done = n
    for k in range(n):
        pk = p[k]
        pm1 = pk ** (m - 1.0)
        pm = pm1 * pk
        delta = alpha * tc[k] + 0.5 * m * mu * sigma * sigma * pm1
        p[k + 1] = pk + mu * pm * (1.0 + delta) * dt + sigma * pm * dw[k]
        tc[k + 1] = tc[k] - alpha * tc[k] * dt + noise_scale * dw[k]
        if not (p[k + 1] > 0.0) or p[k + 1] > p_cap:
            status = HALT_OVERFLOW
            done = k + 1
            break
        if (k + 1) * dt >= t_sing + tc[k + 1]:
            status = HALT_SINGULARITY
            done = k + 1
            break
    return p, tc, done, status


@njit(cache=True)
def euler_model2_numba(y0, x0, tc0, mu, m, sigma, alpha, noise_scale, dt, dw,
                       x_cap, t_sing):
    n = dw.shape[0]
    y = np.empty(n + 1)
    x = np.empty(n + 1)
    tc = np.empty(n + 1)
    y[0] = y0
    x[0] = x0
    tc[0] = tc0
    status = OK
    done = n
    sig_over_mu = sigma / mu
    for k in range(n):
        xk = x[k]
        xm1 = xk ** (m - 1.0)
        xm = xm1 * xk
        gamma = alpha * tc[k] + 0.5 * sigma * sigma / mu * xm1
        delta = alpha * tc[k] + 0.5 * m * mu * sigma * sigma * xm1
        y[k + 1] = y[k] + xk * (1.0 + gamma) * dt + sig_over_mu * xk * dw[k]
        x[k + 1] = xk + mu * xm * (1.0 + delta) * dt + sigma * xm * dw[k]
        tc[k + 1] = tc[k] - alpha * tc[k] * dt + noise_scale * dw[k]
        if not (x[k + 1] > 0.0) or x[k + 1] > x_cap:
            status = HALT_OVERFLOW
            done = k + 1
            break
        if (k + 1) * dt >= t_sing + tc[k + 1]:
            status = HALT_SINGULARITY
            done = k + 1
            break
    return y, x, tc, done, status


def euler_model2_numpy(y0, x0, tc0, mu, m, sigma, alpha, noise_scale, dt, dw,
                       x_cap, t_sing):
    n = dw.shape[0]
    y = np.empty(n + 1)
    x = np.empty(n + 1)
    tc = np.empty(n + 1)
    y[0] = y0
    x[0] = x0
    tc[0] = tc0
    status = OK
    done = n
    sig_over_mu = sigma / mu
    for k in range(n):
        xk = x[k]
        xm1 = xk ** (m - 1.0)
        xm = xm1 * xk
        gamma = alpha * tc[k] + 0.5 * sigma * sigma / mu * xm1
        delta = alpha * tc[k] + 0.5 * m * mu * sigma * sigma * xm1
        y[k + 1] = y[k] + xk * (1.0 + gamma) * dt + sig_over_mu * xk * dw[k]
        x[k + 1] = xk + mu * xm * (1.0 + delta) * dt + sigma * xm * dw[k]
        tc[k + 1] = tc[k] - alpha * tc[k] * dt + noise_scale * dw[k]
        if not (x[k + 1] > 0.0) or x[k + 1] > x_cap:
            status = HALT_OVERFLOW
            done = k + 1
            break
        if (k + 1) * dt >= t_sing + tc[k + 1]:
            status = HALT_SINGULARITY
            done = k + 1
            break
    return y, x, tc, done, status


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

if HAVE_NUMBA:
    df_sums = df_sums_numba
    null_tstats = null_tstats_numba
    affine_df_grid = affine_df_grid_numba
    model1_window_scan = model1_window_scan_numba
    model2_window_scan = model2_window_scan_numba
    euler_ou = euler_ou_numba
    euler_model1 = euler_model1_numba
    euler_model2 = euler_model2_numba
else:
    df_sums = df_sums_numpy
    null_tstats = null_tstats_numpy
    affine_df_grid = affine_df_grid_numpy
    model1_window_scan = model1_window_scan_numpy
    model2_window_scan = model2_window_scan_numpy
    euler_ou = euler_ou_numpy
    euler_model1 = euler_model1_numpy
    euler_model2 = euler_model2_numpy
