"""
Dynamics model interface.

A model advances a StateField by a supported lead and exposes the tangent
linear and adjoint of that step. Subclasses implement the flat-array kernels;
the StateField wrappers here validate leads and grids.
"""

from __future__ import annotations

import dataclasses
from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from src.domain.entities.grid import GridSpec
from src.domain.entities.state import FloatArray, StateField
from src.domain.exceptions import DimensionError, UnsupportedLeadError


class DynamicsModel(ABC):
    """Forward model M (or surrogate N^M) with tangent and adjoint."""

    @property
    @abstractmethod
    def grid(self) -> GridSpec:
        """Grid the model is defined on."""

    @property
    @abstractmethod
    def supported_leads(self) -> tuple[int, ...]:
        """Leads (hours) the model may be invoked with."""

    @property
    def is_linear(self) -> bool:
        return False

    @abstractmethod
    def _step(self, x: FloatArray, lead: int) -> FloatArray:
        """Advance a flat state by `lead` hours."""

    @abstractmethod
    def _tangent(self, x: FloatArray, dx: FloatArray, lead: int) -> FloatArray:
        """Tangent-linear action at base state x."""

    @abstractmethod
    def _adjoint(self, x: FloatArray, lam: FloatArray, lead: int) -> FloatArray:
        """Adjoint action at base state x."""

    @abstractmethod
    def initial_state(self, seed: int = 0) -> StateField:
        """A seeded starting state at time 0."""

    def check_lead(self, lead: int) -> None:
        if lead not in self.supported_leads:
            raise UnsupportedLeadError(lead, tuple(sorted(self.supported_leads)))

    def _check_vector(self, x: FloatArray) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.grid.size,):
            raise DimensionError(
                f"Flat state of shape {x.shape} does not match model size {self.grid.size}"
            )
        return x

    def _check_state(self, state: StateField) -> None:
        if state.grid != self.grid:
            raise DimensionError("State grid does not match the model grid.")

    # Flat-array API used by the solvers.

    def step_array(self, x: FloatArray, lead: int) -> FloatArray:
        self.check_lead(lead)
        return self._step(self._check_vector(x), lead)

    def tangent_array(self, x: FloatArray, dx: FloatArray, lead: int) -> FloatArray:
        self.check_lead(lead)
        return self._tangent(self._check_vector(x), self._check_vector(dx), lead)

    def adjoint_array(self, x: FloatArray, lam: FloatArray, lead: int) -> FloatArray:
        self.check_lead(lead)
        return self._adjoint(self._check_vector(x), self._check_vector(lam), lead)

    # StateField API.

    def step(self, state: StateField, lead: int) -> StateField:
        """Advance `state` by `lead` hours.

        Raises:
            UnsupportedLeadError: lead not in supported_leads.
            DimensionError: state is on another grid.
        """
        self._check_state(state)
        out = self.step_array(state.values.ravel(), lead)
        return StateField(grid=self.grid, values=out.reshape(self.grid.shape), time=state.time + lead)

    def tangent(self, base: StateField, perturbation: StateField, lead: int) -> StateField:
        self._check_state(base)
        self._check_state(perturbation)
        out = self.tangent_array(base.values.ravel(), perturbation.values.ravel(), lead)
        return StateField(grid=self.grid, values=out.reshape(self.grid.shape), time=base.time + lead)

    def adjoint(self, base: StateField, cotangent: StateField, lead: int) -> StateField:
        self._check_state(base)
        self._check_state(cotangent)
        out = self.adjoint_array(base.values.ravel(), cotangent.values.ravel(), lead)
        return StateField(grid=self.grid, values=out.reshape(self.grid.shape), time=base.time)

    def tangent_matrix(self, base: StateField, lead: int) -> FloatArray:
        """Dense M by applying the tangent to unit vectors."""
        self._check_state(base)
        x = base.values.ravel()
        m = self.grid.size
        columns = [self.tangent_array(x, np.eye(1, m, i).ravel(), lead) for i in range(m)]
        return np.stack(columns, axis=1)

    def perturbed(self, **overrides: Any) -> DynamicsModel:
        """Parameter twin of this model, e.g. perturbed(forcing=8.2)."""
        if not dataclasses.is_dataclass(self):
            raise TypeError(f"{type(self).__name__} does not support parameter twins")
        return dataclasses.replace(self, **overrides)  # type: ignore[type-var]
