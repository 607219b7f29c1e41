"""Bubble price models with finite-time singularities and wandering end times.

Model 1 places the singularity in the price itself:

    dp = mu * p^m * (1 + delta(p,t)) dt + sigma * p^m dW,   m > 1

with delta = alpha*tc(t) + m*mu*sigma^2*p^(m-1)/2 and tc(t) an
Ornstein-Uhlenbeck perturbation of the critical time driven by the *same*
Wiener increments. Its pathwise solution is the explosive power law

    p(t) = K * (T_c + tc(t) - t)^(-beta),  beta = 1/(m-1), K = (beta/mu)^beta.

Model 2 places the singularity in the log-price momentum x = dE[ln p]/dt:

    dy = x (1 + gamma(x,t)) dt + (sigma/mu) x dW,  y = ln p
    dx = mu * x^m (1 + delta(x,t)) dt + sigma * x^m dW,   m > 2

whose log-price solution stays finite at the critical time:

    y(t) = A - B * (T_c + tc(t) - t)^(1-beta),  B = (beta/mu)^beta / (1-beta).

Both models collapse to geometric Brownian motion in the appropriate
degenerate limits (m -> 1 resp. m -> 2 with fast mean reversion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _accel
from .errors import Blowup, InvalidStep, PastSingularity

OVERFLOW_FACTOR = 1e12  # state may grow this many times its start before halting


@dataclass(frozen=True)
class OuParams:
    """Mean-reverting perturbation of the critical time.

    dtc = -alpha * tc dt + noise_scale dW, zero unconditional mean.
    noise_scale is sigma/mu of the co-simulated price process.
    """

    alpha: float
    noise_scale: float
    t0_value: float = 0.0

    def __post_init__(self):
        if self.alpha < 0 or self.noise_scale < 0:
            raise ValueError("alpha and noise_scale must be >= 0")

    @property
    def stationary_variance(self) -> float:
        if self.alpha == 0:
            return math.inf
        return self.noise_scale**2 / (2.0 * self.alpha)


@dataclass(frozen=True)
class Model1Params:
    """Price-singularity model parameters.

    The closed form requires m > 1; the SDE simulator also accepts m = 1,
    where the model degenerates to geometric Brownian motion and the
    derived quantities below are undefined.
    """

    mu: float
    m: float
    p0: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.p0 <= 0:
            raise ValueError("p0 must be > 0")

    def _require_super_exponential(self):
        if self.m <= 1:
            raise ValueError("derived constants require m > 1")

    @property
    def beta(self) -> float:
        self._require_super_exponential()
        return 1.0 / (self.m - 1.0)

    @property
    def K(self) -> float:
        return (self.beta / self.mu) ** self.beta

    @property
    def T_c(self) -> float:
        """Unconditional critical time: (beta/mu) * p0^(-1/beta)."""
        return (self.beta / self.mu) * self.p0 ** (-1.0 / self.beta)


@dataclass(frozen=True)
class Model2Params:
    """Momentum-singularity model parameters (m > 2 so beta in (0,1)).

    A is the finite log-price attained exactly at the critical time; x0 is
    the starting momentum.
    """

    mu: float
    m: float
    A: float
    x0: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        if self.m <= 2:
            raise ValueError("m must be > 2")
        if self.x0 <= 0:
            raise ValueError("x0 must be > 0")

    @property
    def beta(self) -> float:
        return 1.0 / (self.m - 1.0)

    @property
    def B(self) -> float:
        return (self.beta / self.mu) ** self.beta / (1.0 - self.beta)

    @property
    def T_c(self) -> float:
        """(beta/mu) * x0^(-1/beta), from the deterministic momentum solution."""
        return (self.beta / self.mu) * self.x0 ** (-1.0 / self.beta)


@dataclass(frozen=True)
class TcPath:
    """A realized critical-time perturbation on a uniform time grid.

    ``T_c + tc_values[i]`` is the critical time seen at ``t_values[i]``.
    ``noise`` retains the Wiener increments that generated the path so the
    same randomness can drive a price simulation.
    """

    t_values: np.ndarray
    tc_values: np.ndarray
    T_c: float = 0.0
    noise: Optional[np.ndarray] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if len(self.t_values) != len(self.tc_values):
            raise ValueError("t_values and tc_values must have equal length")

    def __len__(self) -> int:
        return len(self.t_values)

    def with_mean(self, T_c: float) -> "TcPath":
        return replace(self, T_c=T_c)

    def time_to_singularity(self) -> np.ndarray:
        return self.T_c + self.tc_values - self.t_values


@dataclass(frozen=True)
class Model1SimResult:
    t_values: np.ndarray
    prices: np.ndarray
    tc_path: TcPath
    dt: float
    seed: Optional[int]


@dataclass(frozen=True)
class Model2SimResult:
    t_values: np.ndarray
    log_prices: np.ndarray
    momenta: np.ndarray
    tc_path: TcPath
    dt: float
    seed: Optional[int]


def _check_step(dt: float, n_steps: int):
    if not (dt > 0) or not math.isfinite(dt):
        raise InvalidStep(f"dt must be positive and finite, got {dt}")
    if n_steps < 1:
        raise InvalidStep(f"n_steps must be >= 1, got {n_steps}")


def _draw_increments(n_steps: int, dt: float, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n_steps) * math.sqrt(dt)


def simulate_ou(params: OuParams, dt: float, n_steps: int, seed=None,
                dw: Optional[np.ndarray] = None) -> TcPath:
    """Euler-Maruyama path of the critical-time perturbation.

    Returns the residual part (T_c = 0) with the Wiener increments retained
    in ``noise``. Pass ``dw`` to reuse an existing increment stream.
    """
    _check_step(dt, n_steps)
    if dw is None:
        dw = _draw_increments(n_steps, dt, seed)
    else:
        dw = np.asarray(dw, dtype=np.float64)
        if len(dw) != n_steps:
            raise InvalidStep("dw length must equal n_steps")
    tc = _accel.euler_ou(params.t0_value, params.alpha, params.noise_scale, dt, dw)
    t = np.arange(n_steps + 1, dtype=np.float64) * dt
    return TcPath(t_values=t, tc_values=tc, T_c=0.0, noise=dw, seed=seed)


def _eval_offsets(path: TcPath, t):
    """Indices of requested offsets on the path grid (must match exactly)."""
    if t is None:
        return np.arange(len(path))
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    step = path.t_values[1] - path.t_values[0] if len(path) > 1 else 1.0
    idx = np.rint((t_arr - path.t_values[0]) / step).astype(np.int64)
    if np.any(idx < 0) or np.any(idx >= len(path)):
        raise ValueError("offset outside the simulated path")
    if not np.allclose(path.t_values[idx], t_arr, atol=1e-9 * max(1.0, abs(step))):
        raise ValueError("offset does not lie on the path grid")
    return idx


def model1_price_closed_form(params: Model1Params, path: TcPath, t=None):
    """p(t) = K (T_c + tc(t) - t)^(-beta) on the path grid.

    Raises PastSingularity where the time to the singularity is not
    strictly positive. Scalar ``t`` returns a float; ``t=None`` evaluates
    the whole path.
    """
    idx = _eval_offsets(path, t)
    remain = path.T_c + path.tc_values[idx] - path.t_values[idx]
    if np.any(remain <= 0):
        raise PastSingularity("time to singularity must be positive")
    out = params.K * remain ** (-params.beta)
    if t is not None and np.isscalar(t):
        return float(out[0])
    return out


def model2_logprice_closed_form(params: Model2Params, path: TcPath, t=None):
    """y(t) = A - B (T_c + tc(t) - t)^(1-beta); finite (= A) at the singularity."""
    idx = _eval_offsets(path, t)
    remain = path.T_c + path.tc_values[idx] - path.t_values[idx]
    if np.any(remain < 0):
        raise PastSingularity("time to singularity must be non-negative")
    out = params.A - params.B * remain ** (1.0 - params.beta)
    if t is not None and np.isscalar(t):
        return float(out[0])
    return out


def model2_momentum_closed_form(params: Model2Params, path: TcPath, t=None):
    """x(t) = (beta/mu)^beta (T_c + tc(t) - t)^(-beta); diverges at the singularity."""
    idx = _eval_offsets(path, t)
    remain = path.T_c + path.tc_values[idx] - path.t_values[idx]
    if np.any(remain <= 0):
        raise PastSingularity("time to singularity must be positive")
    out = (params.beta / params.mu) ** params.beta * remain ** (-params.beta)
    if t is not None and np.isscalar(t):
        return float(out[0])
    return out


def simulate_model1_sde(params: Model1Params, ou: OuParams, dt: float,
                        n_steps: int, seed=None,
                        dw: Optional[np.ndarray] = None) -> Model1SimResult:
    """Euler-Maruyama path of the price SDE, co-evolving the critical time.

    One Wiener increment stream drives both the price and tc. The run halts
    with Blowup if the price leaves (0, 1e12 * p0] or the simulated clock
    crosses the wandering critical time.
    """
    _check_step(dt, n_steps)
    if dw is None:
        dw = _draw_increments(n_steps, dt, seed)
    else:
        dw = np.asarray(dw, dtype=np.float64)
        if len(dw) != n_steps:
            raise InvalidStep("dw length must equal n_steps")
    sigma = ou.noise_scale * params.mu
    t_sing = params.T_c if params.m > 1 else math.inf
    p, tc, done, status = _accel.euler_model1(
        params.p0, ou.t0_value, params.mu, params.m, sigma, ou.alpha,
        ou.noise_scale, dt, dw, OVERFLOW_FACTOR * params.p0, t_sing,
    )
    t = np.arange(n_steps + 1, dtype=np.float64) * dt
    tc_path = TcPath(t_values=t[: done + 1], tc_values=tc[: done + 1],
                     T_c=t_sing if math.isfinite(t_sing) else 0.0,
                     noise=dw[:done], seed=seed)
    result = Model1SimResult(t_values=t[: done + 1], prices=p[: done + 1],
                             tc_path=tc_path, dt=dt, seed=seed)
    if status != _accel.OK:
        raise Blowup(done, partial=result)
    return result


def simulate_model2_sde(params: Model2Params, ou: OuParams, dt: float,
                        n_steps: int, seed=None,
                        dw: Optional[np.ndarray] = None) -> Model2SimResult:
    """Euler-Maruyama path of the (log-price, momentum) pair with shared noise.

    Initial conditions are taken from the closed form at t = 0 so that
    convergence studies against it are meaningful: x(0) differs from x0
    only when the tc path starts away from zero.
    """
    _check_step(dt, n_steps)
    if dw is None:
        dw = _draw_increments(n_steps, dt, seed)
    else:
        dw = np.asarray(dw, dtype=np.float64)
        if len(dw) != n_steps:
            raise InvalidStep("dw length must equal n_steps")
    sigma = ou.noise_scale * params.mu
    remain0 = params.T_c + ou.t0_value
    if remain0 <= 0:
        raise PastSingularity("initial time to singularity must be positive")
    x_init = (params.beta / params.mu) ** params.beta * remain0 ** (-params.beta)
    y_init = params.A - params.B * remain0 ** (1.0 - params.beta)
    y, x, tc, done, status = _accel.euler_model2(
        y_init, x_init, ou.t0_value, params.mu, params.m, sigma, ou.alpha,
        ou.noise_scale, dt, dw, OVERFLOW_FACTOR * x_init, params.T_c,
    )
    t = np.arange(n_steps + 1, dtype=np.float64) * dt
    tc_path = TcPath(t_values=t[: done + 1], tc_values=tc[: done + 1],
                     T_c=params.T_c, noise=dw[:done], seed=seed)
    result = Model2SimResult(t_values=t[: done + 1], log_prices=y[: done + 1],
                             momenta=x[: done + 1], tc_path=tc_path, dt=dt,
                             seed=seed)
    if status != _accel.OK:
        raise Blowup(done, partial=result)
    return result


def model1_return_approx(params: Model1Params, time_to_singularity: float,
                         delta_tc: float, tau: float) -> float:
    """First-order log return over horizon tau: beta/(T_c+tc-t) * (tau - dtc).

    Valid when |delta_tc - tau| is small against the time to the
    singularity (caller-checked).
    """
    return params.beta / time_to_singularity * (tau - delta_tc)


def model2_return_approx(params: Model2Params, time_to_singularity: float,
                         delta_tc: float, tau: float) -> float:
    """First-order log return: (1-beta) B (T_c+tc-t)^(-beta) * (tau - dtc)."""
    return ((1.0 - params.beta) * params.B
            * time_to_singularity ** (-params.beta) * (tau - delta_tc))
