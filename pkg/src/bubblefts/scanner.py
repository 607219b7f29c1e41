"""Sliding-window bubble scan, alarm criteria, and alarm clustering.

A window raises an alarm when its calibration both rejects non-stationarity
(non-empty elite) and places the estimated critical time appropriately:

* price-singularity model: positive exponent and a critical time between 0
  and 750 trading days ahead, with nested severity at < 750 / < 500 / < 250;
* momentum-singularity model: critical time within [-25, +50] trading days
  of the window end, with severity levels m > 2 / m > 2.5 / m > 3.

Repeated alarms from successive windows form clusters; isolated alarms are
their own cluster.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Optional, Sequence

from .calibrate import CalibrationResult, GridSpec, grid_search
from .errors import SeriesTooShort
from .timeseries import PriceSeries, slice_window
from .unitroot import CriticalValueTable

MODEL_TAGS = {"fts-price": "model1", "fts-momentum": "model2"}
DEFAULT_STEP = 25
DEFAULT_MAX_GAP = 50  # trading days; two consecutive missed windows break a chain

MODEL1_LEVELS = (750, 500, 250)  # horizon thresholds, tightest last
MODEL2_LEVELS = ((3, 3.0), (2, 2.5), (1, 2.0))  # (level, exponent bound)


@dataclass(frozen=True)
class AlarmRecord:
    """One flagged window."""

    window_end_date: date
    end_index: int
    model: str  # "fts-price" | "fts-momentum"
    t_c_date: date
    horizon_days: float
    m: float
    beta: float
    level: int

    def to_dict(self) -> dict:
        return {
            "window_end": self.window_end_date.isoformat(),
            "end_index": self.end_index,
            "model": self.model,
            "t_c_date": self.t_c_date.isoformat(),
            "horizon_days": int(round(self.horizon_days)),
            "m": self.m,
            "beta": self.beta,
            "level": self.level,
        }


@dataclass(frozen=True)
class AlarmCluster:
    """A chain of alarms whose window ends are at most max_gap days apart."""

    alarms: tuple[AlarmRecord, ...]

    @property
    def start_date(self) -> date:
        return self.alarms[0].window_end_date

    @property
    def end_date(self) -> date:
        return self.alarms[-1].window_end_date

    @property
    def model(self) -> str:
        return self.alarms[0].model

    @property
    def peak_level(self) -> int:
        # strongest alarm: tightest horizon bound for the price model,
        # highest exponent level for the momentum model
        levels = [a.level for a in self.alarms]
        return min(levels) if self.model == "fts-price" else max(levels)

    def __len__(self) -> int:
        return len(self.alarms)


@dataclass(frozen=True)
class ScanConfig:
    model: str  # "fts-price" | "fts-momentum"
    grid: GridSpec
    table: CriticalValueTable
    step: int = DEFAULT_STEP

    def __post_init__(self):
        if self.model not in MODEL_TAGS:
            raise ValueError(f"unknown model tag {self.model!r}")
        if MODEL_TAGS[self.model] != self.grid.model:
            raise ValueError("grid spec does not match the model tag")
        if self.step < 1:
            raise ValueError("step must be >= 1")

    @classmethod
    def default(cls, model: str, table: CriticalValueTable,
                window_length: Optional[int] = None,
                step: int = DEFAULT_STEP) -> "ScanConfig":
        if model == "fts-price":
            grid = GridSpec.model1_default(window_length or 750)
        else:
            grid = GridSpec.model2_default(window_length or 900)
        return cls(model=model, grid=grid, table=table, step=step)


def classify_model1(horizon: float, beta: float) -> Optional[int]:
    """Tightest satisfied horizon threshold, or None."""
    if beta <= 0 or horizon < 0:
        return None
    level = None
    for bound in MODEL1_LEVELS:
        if horizon < bound:
            level = bound
    return level


def classify_model2(horizon: float, m: float) -> Optional[int]:
    """Highest satisfied exponent level inside the horizon band, or None."""
    if not (-25.0 <= horizon <= 50.0):
        return None
    for level, bound in MODEL2_LEVELS:
        if m > bound:
            return level
    return None


def _t_c_date(series: PriceSeries, end_index: int, horizon: float) -> date:
    """Absolute date of the estimated critical time.

    Uses the series' own calendar while it lasts; beyond the last row,
    extrapolates at 7 calendar days per 5 trading days.
    """
    target = end_index + int(round(horizon))
    if 0 <= target < len(series):
        return series.date_at(target)
    end_date = series.date_at(end_index)
    if target >= len(series):
        overshoot = target - (len(series) - 1)
        anchor = series.date_at(len(series) - 1)
        return anchor + timedelta(days=round(overshoot * 7 / 5))
    return end_date + timedelta(days=round(horizon * 7 / 5))


def _alarm_from_calibration(series: PriceSeries, model: str,
                            result: CalibrationResult) -> Optional[AlarmRecord]:
    if result.best is None:
        return None
    horizon = result.horizon
    m = result.m
    beta = result.best.beta
    if model == "fts-price":
        level = classify_model1(horizon, beta)
    else:
        level = classify_model2(horizon, m)
    if level is None:
        return None
    return AlarmRecord(
        window_end_date=series.date_at(result.window_end_index),
        end_index=result.window_end_index,
        model=model,
        t_c_date=_t_c_date(series, result.window_end_index, horizon),
        horizon_days=horizon,
        m=m,
        beta=beta,
        level=level,
    )


def _scan_one(series: PriceSeries, end_index: int,
              config: ScanConfig) -> CalibrationResult:
    window = slice_window(series, end_index, config.grid.window_length)
    return grid_search(window, config.grid, config.table)


def scan(series: PriceSeries, config: ScanConfig, jobs: int = 1
         ) -> list[AlarmRecord]:
    """Calibrate every window (left to right, fixed step) and emit alarms.

    Windows are independent; with jobs > 1 they are evaluated in a process
    pool. Output order and content do not depend on the worker count.
    """
    length = config.grid.window_length
    if len(series) < length:
        raise SeriesTooShort(
            f"series of {len(series)} days cannot host a {length}-day window")
    ends = list(range(length - 1, len(series), config.step))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_one, [series] * len(ends), ends,
                                    [config] * len(ends), chunksize=4))
    else:
        results = [_scan_one(series, e, config) for e in ends]
    alarms = []
    for res in results:
        alarm = _alarm_from_calibration(series, config.model, res)
        if alarm is not None:
            alarms.append(alarm)
    return alarms


def cluster_alarms(alarms: Sequence[AlarmRecord],
                   max_gap: int = DEFAULT_MAX_GAP) -> list[AlarmCluster]:
    """Greedy chaining of date-sorted alarms by trading-day gap."""
    clusters: list[AlarmCluster] = []
    current: list[AlarmRecord] = []
    for alarm in alarms:
        if current and alarm.end_index - current[-1].end_index > max_gap:
            clusters.append(AlarmCluster(alarms=tuple(current)))
            current = []
        current.append(alarm)
    if current:
        clusters.append(AlarmCluster(alarms=tuple(current)))
    return clusters
