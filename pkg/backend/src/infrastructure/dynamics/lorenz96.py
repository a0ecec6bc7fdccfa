"""
Lorenz96 ring model.

dx_i/dt = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F with cyclic indices,
integrated with fixed-substep RK4. One model time unit is 120 model hours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField

from .base import DynamicsModel

HOURS_PER_MTU = 120.0


def _tendency(x: FloatArray, forcing: float) -> FloatArray:
    return (np.roll(x, -1) - np.roll(x, 2)) * np.roll(x, 1) - x + forcing


def _jvp(x: FloatArray, dx: FloatArray) -> FloatArray:
    return (
        (np.roll(dx, -1) - np.roll(dx, 2)) * np.roll(x, 1)
        + (np.roll(x, -1) - np.roll(x, 2)) * np.roll(dx, 1)
        - dx
    )


def _vjp(x: FloatArray, lam: FloatArray) -> FloatArray:
    a = np.roll(x, 1) * lam
    b = (np.roll(x, -1) - np.roll(x, 2)) * lam
    return np.roll(a, 1) - np.roll(a, -2) + np.roll(b, -1) - lam


def _smooth(x: FloatArray, gamma: float) -> FloatArray:
    if gamma == 0.0:
        return x
    return x + gamma * (np.roll(x, 1) - 2.0 * x + np.roll(x, -1))


@dataclass(frozen=True)
class Lorenz96Model(DynamicsModel):
    """Lorenz96 with RK4 substeps of `dt_internal` hours.

    Attributes:
        m: Ring size (>= 4).
        forcing: F.
        dt_internal: Target RK4 substep in hours; each call uses
            ceil(lead / dt_internal) equal substeps.
        leads: Supported leads in hours.
        call_smoothing: Strength of a ring smoothing applied once at the end
            of every call, emulating per-invocation surrogate error.
    """

    m: int = 40
    forcing: float = 8.0
    dt_internal: float = 3.0
    leads: tuple[int, ...] = (6, 12, 24)
    call_smoothing: float = 0.0
    _grid: GridSpec = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.m < 4:
            raise ValueError(f"Lorenz96 needs m >= 4, got {self.m}")
        if self.dt_internal <= 0:
            raise ValueError("dt_internal must be > 0")
        if not 0.0 <= self.call_smoothing <= 0.25:
            raise ValueError("call_smoothing must lie in [0, 0.25]")
        object.__setattr__(self, "leads", tuple(sorted(int(v) for v in self.leads)))
        object.__setattr__(self, "_grid", GridSpec.ring(self.m))

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def supported_leads(self) -> tuple[int, ...]:
        return self.leads

    def _substeps(self, lead: int) -> tuple[int, float]:
        n = max(1, math.ceil(lead / self.dt_internal - 1e-12))
        return n, (lead / n) / HOURS_PER_MTU

    def _rk4(self, x: FloatArray, h: float) -> FloatArray:
        k1 = _tendency(x, self.forcing)
        k2 = _tendency(x + 0.5 * h * k1, self.forcing)
        k3 = _tendency(x + 0.5 * h * k2, self.forcing)
        k4 = _tendency(x + h * k3, self.forcing)
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _trajectory(self, x: FloatArray, lead: int) -> tuple[list[FloatArray], float]:
        n, h = self._substeps(lead)
        states = [x]
        for _ in range(n - 1):
            states.append(self._rk4(states[-1], h))
        return states, h

    def _step(self, x: FloatArray, lead: int) -> FloatArray:
        n, h = self._substeps(lead)
        for _ in range(n):
            x = self._rk4(x, h)
        return _smooth(x, self.call_smoothing)

    def _tangent(self, x: FloatArray, dx: FloatArray, lead: int) -> FloatArray:
        states, h = self._trajectory(x, lead)
        for xs in states:
            k1 = _tendency(xs, self.forcing)
            k2 = _tendency(xs + 0.5 * h * k1, self.forcing)
            k3 = _tendency(xs + 0.5 * h * k2, self.forcing)
            d1 = _jvp(xs, dx)
            d2 = _jvp(xs + 0.5 * h * k1, dx + 0.5 * h * d1)
            d3 = _jvp(xs + 0.5 * h * k2, dx + 0.5 * h * d2)
            d4 = _jvp(xs + h * k3, dx + h * d3)
            dx = dx + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        return _smooth(dx, self.call_smoothing)

    def _adjoint(self, x: FloatArray, lam: FloatArray, lead: int) -> FloatArray:
        states, h = self._trajectory(x, lead)
        lam = _smooth(lam, self.call_smoothing)
        for xs in reversed(states):
            k1 = _tendency(xs, self.forcing)
            k2 = _tendency(xs + 0.5 * h * k1, self.forcing)
            k3 = _tendency(xs + 0.5 * h * k2, self.forcing)
            mu4 = _vjp(xs + h * k3, (h / 6.0) * lam)
            mu3 = _vjp(xs + 0.5 * h * k2, (h / 3.0) * lam + h * mu4)
            mu2 = _vjp(xs + 0.5 * h * k1, (h / 3.0) * lam + 0.5 * h * mu3)
            mu1 = _vjp(xs, (h / 6.0) * lam + 0.5 * h * mu2)
            lam = lam + mu1 + mu2 + mu3 + mu4
        return lam

    def initial_state(self, seed: int = 0) -> StateField:
        """F everywhere plus a small seeded perturbation; spin up before use."""
        rng = np.random.default_rng(seed)
        x = self.forcing + 0.01 * rng.standard_normal(self.m)
        return StateField(grid=self._grid, values=x.reshape(self._grid.shape), time=0)
