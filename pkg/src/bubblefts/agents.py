"""Optimal exit times for heterogeneous bubble-riding arbitrageurs.

Each arbitrageur believes the crash hazard diverges as a power law of the
distance to her privately estimated critical time. Balancing the expected
instantaneous gain of staying in against the expected crash loss yields a
first-order condition whose root is her exit date. Expectations are taken
in the deterministic (sigma -> 0) limit, which reduces the condition to a
scalar root-finding problem:

    model 1:  beta / (T_c - t)            = kappa * c_i * (T_ci - t)^(-beta_i)
    model 2:  x(t) / kappa                = c_i * (T_ci - t)^(-beta_i),
              x(t) = [(m-1) mu (T_c - t)]^(-1/(m-1))

Because beliefs differ, so do exit times: no two agents leave together and
the bubble survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import NoInteriorExit, PastCriticalTime
from .models import Model1Params, Model2Params

BISECT_TOL = 1e-12  # width of the final bracket, in time units


@dataclass(frozen=True)
class ArbitrageurBelief:
    """One agent's view of the bubble's end."""

    T_ci: float  # believed critical time
    beta_i: float  # hazard divergence exponent
    c_i: float  # hazard proportionality constant
    kappa: float  # expected crash fraction
    t_entry: float = 0.0

    def __post_init__(self):
        if self.beta_i <= 0 or self.c_i <= 0:
            raise ValueError("beta_i and c_i must be > 0")
        if not (0.0 < self.kappa < 1.0):
            raise ValueError("kappa must lie in (0, 1)")
        if self.t_entry >= self.T_ci:
            raise ValueError("t_entry must precede the believed critical time")


@dataclass(frozen=True)
class ExitSolution:
    t_exit: float
    residual: float
    bracket: tuple[float, float]


def hazard_rate(belief: ArbitrageurBelief, t: float) -> float:
    """c_i * (T_ci - t)^(-beta_i); diverges as t approaches T_ci."""
    remain = belief.T_ci - t
    if remain <= 0:
        raise PastCriticalTime(f"t={t} is at or beyond T_ci={belief.T_ci}")
    return belief.c_i * remain ** (-belief.beta_i)


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoInteriorExit(bracket=(lo, hi))
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _solve(f: Callable[[float], float], belief: ArbitrageurBelief,
           market_T_c: float) -> ExitSolution:
    upper = min(market_T_c, belief.T_ci)
    lo = belief.t_entry
    if lo >= upper:
        raise NoInteriorExit(bracket=(lo, upper),
                             message="belief and market horizons do not overlap")
    # both sides diverge at the edge; evaluate just inside
    hi = upper - 1e-9 * (upper - lo)
    root = _bisect(f, lo, hi)
    return ExitSolution(t_exit=root, residual=f(root), bracket=(lo, hi))


def exit_time_model1(belief: ArbitrageurBelief, market: Model1Params
                     ) -> ExitSolution:
    """Root of the deterministic-limit first-order condition for model 1."""
    beta = market.beta
    T_c = market.T_c
    kc = belief.kappa * belief.c_i

    def foc(t: float) -> float:
        return beta / (T_c - t) - kc * (belief.T_ci - t) ** (-belief.beta_i)

    return _solve(foc, belief, T_c)


def exit_time_model2(belief: ArbitrageurBelief, market: Model2Params
                     ) -> ExitSolution:
    """Root of the deterministic-limit first-order condition for model 2."""
    T_c = market.T_c
    coeff = (market.beta / market.mu) ** market.beta

    def foc(t: float) -> float:
        x = coeff * (T_c - t) ** (-market.beta)
        return x / belief.kappa - belief.c_i * (belief.T_ci - t) ** (-belief.beta_i)

    return _solve(foc, belief, T_c)
