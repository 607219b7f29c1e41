"""Per-window grid calibration: transform, unit-root test, elite selection.

The two-step procedure per window: evaluate every grid point (transform the
prices, split off the mean, Dickey-Fuller test the residual), keep the
points that reject non-stationarity, rank them by ascending t statistic,
truncate to the ten best, then choose the point whose residual has the
smallest variance. Windows where nothing rejects yield no calibration.

Exponent grids are linear; scale grids are logarithmic and anchored to the
window so that the implied mean critical-time horizon sweeps a fixed range
of trading days regardless of the price level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import _accel
from .errors import WindowLengthMismatch
from .timeseries import PriceWindow
from .transform import Model1SearchPoint, Model2SearchPoint
from .unitroot import CriticalValueTable

SearchPoint = Union[Model1SearchPoint, Model2SearchPoint]

ELITE_SIZE = 10


@dataclass(frozen=True)
class GridSpec:
    """Search-grid resolution and bounds for one model."""

    model: str  # "model1" | "model2"
    window_length: int
    n_beta: int = 64
    n_scale: int = 64
    n_A: int = 32  # model 2 only
    beta_max: float = 2.0  # model 1 exponent grid upper edge
    h_min: float = 1.0  # implied mean horizon range, trading days
    h_max: float = 3000.0

    def __post_init__(self):
        if self.model not in ("model1", "model2"):
            raise ValueError(f"unknown model {self.model!r}")
        if min(self.n_beta, self.n_scale, self.n_A) < 1:
            raise ValueError("grid sizes must be >= 1")
        if not (0 < self.h_min < self.h_max):
            raise ValueError("need 0 < h_min < h_max")

    @classmethod
    def model1_default(cls, window_length: int = 750) -> "GridSpec":
        return cls(model="model1", window_length=window_length)

    @classmethod
    def model2_default(cls, window_length: int = 900) -> "GridSpec":
        return cls(model="model2", window_length=window_length)

    def beta_values(self) -> np.ndarray:
        if self.model == "model1":
            # (0, beta_max], endpoint included
            return self.beta_max * np.arange(1, self.n_beta + 1) / self.n_beta
        # (0, 1) strictly
        return np.arange(1, self.n_beta + 1) / (self.n_beta + 1.0)

    def h_values(self) -> np.ndarray:
        return np.geomspace(self.h_min, self.h_max, self.n_scale)

    def a_values(self, max_log_price: float) -> np.ndarray:
        # (max ln p, max ln p + span]; span follows the window's own scale
        span = max_log_price if max_log_price > 0 else 1.0
        return max_log_price + span * np.arange(1, self.n_A + 1) / self.n_A


@dataclass(frozen=True)
class EliteCandidate:
    """One rejecting grid point with its test statistic and residual variance."""

    point: SearchPoint
    t_stat: float
    variance: float
    T_c_hat: float
    grid_index: int

    @property
    def beta(self) -> float:
        return self.point.beta

    @property
    def m(self) -> float:
        return self.point.m

    @property
    def mu(self) -> float:
        return self.point.mu


@dataclass(frozen=True)
class CalibrationResult:
    """Elite list and minimum-variance choice for one window."""

    model: str
    window_end_index: int
    window_length: int
    critical_value: float
    elite: tuple[EliteCandidate, ...] = field(default_factory=tuple)
    best: Optional[EliteCandidate] = None

    @property
    def T_c_hat(self) -> Optional[float]:
        return self.best.T_c_hat if self.best else None

    @property
    def m(self) -> Optional[float]:
        return self.best.m if self.best else None

    @property
    def mu(self) -> Optional[float]:
        return self.best.mu if self.best else None

    @property
    def horizon(self) -> Optional[float]:
        """Estimated critical time minus the window's last day, trading days."""
        if self.best is None:
            return None
        return self.best.T_c_hat - (self.window_length - 1)


def rank_elite(candidates: Sequence[EliteCandidate]) -> tuple[EliteCandidate, ...]:
    """Ascending t statistic, ties by smaller variance then grid order."""
    ordered = sorted(candidates,
                     key=lambda c: (c.t_stat, c.variance, c.grid_index))
    return tuple(ordered[:ELITE_SIZE])


def _pick_best(elite: Sequence[EliteCandidate]) -> Optional[EliteCandidate]:
    if not elite:
        return None
    return min(elite, key=lambda c: (c.variance, c.grid_index))


def grid_search(window: PriceWindow, grid: GridSpec,
                table: CriticalValueTable) -> CalibrationResult:
    """Evaluate the full grid on one window and select elite and best."""
    if window.length != grid.window_length:
        raise WindowLengthMismatch(
            f"window length {window.length} != configured {grid.window_length}")
    cv = table.lookup(window.length)
    tbar = (window.length - 1) / 2.0
    betas = grid.beta_values()
    hs = grid.h_values()
    candidates: list[EliteCandidate] = []

    if grid.model == "model1":
        t, var, c1 = _accel.model1_window_scan(window.closes, betas, hs)
        for bi in range(len(betas)):
            for hi in range(len(hs)):
                ts = t[bi, hi]
                if not np.isfinite(ts) or ts >= cv:
                    continue
                point = Model1SearchPoint(c1=float(c1[bi, hi]),
                                          beta=float(betas[bi]))
                candidates.append(EliteCandidate(
                    point=point, t_stat=float(ts), variance=float(var[bi, hi]),
                    T_c_hat=float(hs[hi] + tbar),
                    grid_index=bi * len(hs) + hi))
    else:
        log_p = np.log(window.closes)
        a_grid = grid.a_values(float(log_p.max()))
        t, var, lam = _accel.model2_window_scan(log_p, a_grid, betas, hs)
        for ai in range(len(a_grid)):
            for bi in range(len(betas)):
                for hi in range(len(hs)):
                    ts = t[ai, bi, hi]
                    if not np.isfinite(ts) or ts >= cv:
                        continue
                    beta = float(betas[bi])
                    b_val = float(lam[ai, bi, hi]) ** (-(1.0 - beta))
                    point = Model2SearchPoint(A=float(a_grid[ai]), B=b_val,
                                              beta=beta)
                    candidates.append(EliteCandidate(
                        point=point, t_stat=float(ts),
                        variance=float(var[ai, bi, hi]),
                        T_c_hat=float(hs[hi] + tbar),
                        grid_index=(ai * len(betas) + bi) * len(hs) + hi))

    elite = rank_elite(candidates)
    best = _pick_best(elite)
    return CalibrationResult(model=grid.model,
                             window_end_index=window.end_index,
                             window_length=window.length,
                             critical_value=cv, elite=elite, best=best)
