"""Nonlinear price-to-critical-time inversions and the mean/residual split.

Inverting the closed-form bubble solutions turns a possibly explosive price
window into a candidate critical-time series T(t) that should be stationary
when the window really follows the model. The arithmetic mean of T(t)
estimates the expected critical time; the residual is what the unit-root
test gets to judge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainViolation, EmptySeries, InvalidSearchPoint
from .timeseries import PriceWindow


@dataclass(frozen=True)
class Model1SearchPoint:
    """Candidate (prefactor, exponent) pair for the price-singularity inversion.

    c1 multiplies p^(-1/beta); for an exact model path the matching value
    is beta/mu, so mu is reported back as beta/c1.
    """

    c1: float
    beta: float

    def __post_init__(self):
        if self.c1 <= 0 or self.beta <= 0:
            raise InvalidSearchPoint(f"c1 and beta must be > 0: {self}")

    @property
    def m(self) -> float:
        return 1.0 + 1.0 / self.beta

    @property
    def mu(self) -> float:
        return self.beta / self.c1


@dataclass(frozen=True)
class Model2SearchPoint:
    """Candidate (A, B, beta) triplet for the momentum-singularity inversion."""

    A: float
    B: float
    beta: float

    def __post_init__(self):
        if self.B <= 0:
            raise InvalidSearchPoint(f"B must be > 0: {self}")
        if not (0.0 < self.beta < 1.0):
            raise InvalidSearchPoint(f"beta must lie in (0,1): {self}")

    @property
    def m(self) -> float:
        return 1.0 + 1.0 / self.beta

    @property
    def mu(self) -> float:
        return self.beta * ((1.0 - self.beta) * self.B) ** (-1.0 / self.beta)


@dataclass(frozen=True)
class CriticalTimePath:
    """Transformed window: candidate critical times, their mean, the residual."""

    t_values: np.ndarray
    T_tilde: np.ndarray
    T_c_hat: float
    residual: np.ndarray

    def __len__(self) -> int:
        return len(self.T_tilde)


def split_mean_residual(T_tilde: np.ndarray) -> tuple[float, np.ndarray]:
    """Arithmetic mean and zero-mean residual of a candidate series."""
    arr = np.asarray(T_tilde, dtype=np.float64)
    if arr.size == 0:
        raise EmptySeries("cannot split an empty series")
    mean = float(arr.mean())
    return mean, arr - mean


def _build_path(t_values: np.ndarray, T_tilde: np.ndarray) -> CriticalTimePath:
    mean, residual = split_mean_residual(T_tilde)
    return CriticalTimePath(t_values=t_values, T_tilde=T_tilde,
                            T_c_hat=mean, residual=residual)


def invert_model1(window: PriceWindow, point: Model1SearchPoint) -> CriticalTimePath:
    """T(t) = c1 * p(t)^(-1/beta) + t over the window.

    t is the within-window trading-day offset; add the window's end date to
    report absolute critical times.
    """
    t = window.t_values
    T_tilde = point.c1 * window.closes ** (-1.0 / point.beta) + t
    if not np.all(np.isfinite(T_tilde)):
        raise InvalidSearchPoint(
            f"transform overflows for beta={point.beta}, c1={point.c1}")
    return _build_path(t, T_tilde)


def invert_model2(window: PriceWindow, point: Model2SearchPoint) -> CriticalTimePath:
    """T(t) = t + ((A - ln p(t))/B)^(1/(1-beta)) over the window."""
    t = window.t_values
    log_p = np.log(window.closes)
    gap = point.A - log_p
    if np.any(gap < 0):
        raise DomainViolation(
            f"A={point.A} is below the window's max log price {log_p.max()}")
    T_tilde = t + (gap / point.B) ** (1.0 / (1.0 - point.beta))
    if not np.all(np.isfinite(T_tilde)):
        raise InvalidSearchPoint(
            f"transform overflows for beta={point.beta}, B={point.B}")
    return _build_path(t, T_tilde)
