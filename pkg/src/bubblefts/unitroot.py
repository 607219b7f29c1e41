"""Dickey-Fuller unit-root test without intercept, with Monte Carlo critical values.

The regression is Delta x_t = rho * x_{t-1} + eps_t (no constant, no lagged
differences). It is a lower-tail test: the more negative the t statistic,
the stronger the evidence against a unit root. Critical values are the
empirical quantiles of the t statistic over simulated driftless Gaussian
random walks, computed by this module rather than taken from published
tables so that they match this exact test variant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from . import _accel
from .errors import (
    DegenerateRegressor,
    InsufficientReps,
    MissingLength,
    ZeroResidualVariance,
)

MIN_REPS = 10_000
_CHUNK = 2048  # replication chunk; fixed so results never depend on scheduling


@dataclass(frozen=True)
class DfResult:
    """Outcome of one Dickey-Fuller regression."""

    rho_hat: float
    t_stat: float
    n_obs: int
    reject: Optional[bool] = None
    critical_value: Optional[float] = None
    degenerate: Optional[str] = None


@dataclass(frozen=True)
class CriticalValueTable:
    """Lower-tail critical values per series length at a fixed size.

    Reproducible from (level, reps, seed); the packaged default table was
    generated by ``df_critical_value`` at the recorded settings.
    """

    level: float
    reps: int
    seed: int
    values: dict[int, float] = field(default_factory=dict)

    def lookup(self, length: int) -> float:
        try:
            return self.values[length]
        except KeyError:
            raise MissingLength(length) from None

    def to_json(self) -> str:
        payload = {
            "level": self.level,
            "reps": self.reps,
            "seed": self.seed,
            "values": {str(k): v for k, v in sorted(self.values.items())},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CriticalValueTable":
        payload = json.loads(text)
        return cls(
            level=float(payload["level"]),
            reps=int(payload["reps"]),
            seed=int(payload["seed"]),
            values={int(k): float(v) for k, v in payload["values"].items()},
        )

    @classmethod
    def load_default(cls) -> "CriticalValueTable":
        text = (resources.files("bubblefts") / "data" / "df_critical_values.json"
                ).read_text()
        return cls.from_json(text)

    @classmethod
    def compute(cls, lengths, level: float, reps: int, seed: int
                ) -> "CriticalValueTable":
        values = {int(n): df_critical_value(int(n), level, reps, seed)
                  for n in lengths}
        return cls(level=level, reps=reps, seed=seed, values=values)


def df_tstat(x) -> DfResult:
    """OLS of Delta x_t on x_{t-1}, no intercept; t = rho_hat / se(rho_hat).

    se^2 = [SSR / (n_obs - 1)] / sum(x_{t-1}^2) with n_obs = len(x) - 1.
    Raises on degenerate inputs instead of returning NaN.
    """
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < 3:
        raise ValueError("series must be 1-d with length >= 3")
    sxx, sxd, sdd = _accel.df_sums(arr)
    n_obs = len(arr) - 1
    if sxx <= 0.0:
        if sdd == 0.0:
            raise ZeroResidualVariance("series is identically constant")
        raise DegenerateRegressor("lagged levels are identically zero")
    rho = sxd / sxx
    ssr = sdd - sxd * sxd / sxx
    if ssr <= 0.0:
        raise ZeroResidualVariance("regression residuals are exactly zero")
    t = sxd * math.sqrt((n_obs - 1) / (sxx * ssr))
    return DfResult(rho_hat=rho, t_stat=t, n_obs=n_obs)


def df_critical_value(length: int, level: float, reps: int, seed: int) -> float:
    """Empirical `level`-quantile of the null t distribution.

    Simulates ``reps`` driftless Gaussian random walks of the given length
    in fixed chunks with per-chunk derived seeds, so the value depends only
    on (length, level, reps, seed).
    """
    if not (0.0 < level < 0.5):
        raise ValueError("level must lie in (0, 0.5)")
    if reps < MIN_REPS:
        raise InsufficientReps(f"need at least {MIN_REPS} replications, got {reps}")
    if length < 3:
        raise ValueError("length must be >= 3")
    tstats = np.empty(reps)
    done = 0
    chunk_index = 0
    while done < reps:
        n = min(_CHUNK, reps - done)
        rng = np.random.default_rng([seed, chunk_index])
        z = rng.standard_normal((n, length))
        tstats[done : done + n] = _accel.null_tstats(z)
        done += n
        chunk_index += 1
    return float(np.quantile(tstats, level))


def reject_unit_root(x, table: CriticalValueTable) -> DfResult:
    """Decide against the table's critical value for this series length.

    Degenerate regressions (zero levels or exactly zero residuals) are
    reported as non-rejections with the diagnostic recorded, not raised.
    """
    arr = np.asarray(x, dtype=np.float64)
    cv = table.lookup(len(arr))
    try:
        res = df_tstat(arr)
    except (DegenerateRegressor, ZeroResidualVariance) as exc:
        return DfResult(rho_hat=math.nan, t_stat=math.nan, n_obs=len(arr) - 1,
                        reject=False, critical_value=cv,
                        degenerate=type(exc).__name__)
    return DfResult(rho_hat=res.rho_hat, t_stat=res.t_stat, n_obs=res.n_obs,
                    reject=bool(res.t_stat < cv), critical_value=cv)
