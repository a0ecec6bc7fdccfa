"""
Covariance operators for the background (B), the observations (R) and their
hybrid with an ensemble (P^e).

Operators act on flat state vectors. The square-root pair defines the
control-variable transform x = x_b + B^{1/2} v used by the variational solver.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag
from scipy.sparse.linalg import LinearOperator, cg

from src.domain.entities.grid import GridSpec
from src.domain.entities.observations import ObsErrorTable, SlotKey
from src.domain.entities.state import FloatArray
from src.domain.exceptions import DimensionError, NumericalError
from src.infrastructure.osse.operator import ObservationOperator

from .localization import gaspari_cohn, horizontal_distance

_EIGEN_FLOOR = 1e-10


class CovarianceOperator(ABC):
    """Symmetric positive semidefinite operator on flat state vectors."""

    @property
    @abstractmethod
    def size(self) -> int:
        """State dimension m."""

    @property
    @abstractmethod
    def control_size(self) -> int:
        """Length of the control vector v in x = x_b + B^{1/2} v."""

    @abstractmethod
    def apply(self, v: FloatArray) -> FloatArray:
        """B v."""

    @abstractmethod
    def sqrt_apply(self, w: FloatArray) -> FloatArray:
        """B^{1/2} w for a control vector w."""

    @abstractmethod
    def sqrt_adjoint(self, v: FloatArray) -> FloatArray:
        """(B^{1/2})^T v."""

    def inv_apply(self, v: FloatArray) -> FloatArray:
        """B^{-1} v by conjugate gradients."""
        solution, info = cg(self.as_linear_operator(), v, rtol=1e-12, maxiter=10 * self.size)
        if info != 0:
            raise NumericalError("Conjugate-gradient inverse of the covariance did not converge.")
        return np.asarray(solution)

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(
            shape=(self.size, self.size), matvec=self.apply, dtype=np.float64
        )

    def dense(self) -> FloatArray:
        return np.stack([self.apply(e) for e in np.eye(self.size)], axis=1)


@dataclass(frozen=True, eq=False)
class BackgroundCov(CovarianceOperator):
    """Static B with one variance per (variable, level) slot.

    Without a correlation length B is diagonal. With one, every slot block is
    sigma^2 C, where C is the Gaspari-Cohn correlation of horizontal distance
    between cells (ring index units or km); eigenvalues of C below a small
    floor are set to zero before the square root is taken. Inactive slots
    carry zero variance, so the transform never moves them and the inverse
    acts as a pseudo-inverse there.
    """

    grid: GridSpec
    variances: Mapping[SlotKey, float]
    correlation_length: float | None = None
    _diagonal: FloatArray = field(init=False, repr=False)
    _correlation: FloatArray | None = field(init=False, repr=False, default=None)
    _root: FloatArray | None = field(init=False, repr=False, default=None)
    _pinv: FloatArray | None = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        diagonal = np.zeros(self.grid.shape)
        for slot in self.grid.slots():
            if slot.key not in self.variances:
                raise DimensionError(f"No background variance for {slot.label}")
            variance = float(self.variances[slot.key])
            if not variance > 0:
                raise ValueError(f"Background variance for {slot.label} must be > 0")
            diagonal[slot.var_index, slot.level_index] = variance
        object.__setattr__(self, "variances", dict(self.variances))
        object.__setattr__(self, "_diagonal", diagonal.ravel())
        if self.correlation_length is None:
            return
        cells = np.arange(self.grid.n_cells)
        correlation = gaspari_cohn(
            horizontal_distance(self.grid, cells, cells), self.correlation_length
        )
        eigvals, eigvecs = np.linalg.eigh(0.5 * (correlation + correlation.T))
        kept = eigvals > _EIGEN_FLOOR * eigvals.max()
        eigvals = np.where(kept, eigvals, 0.0)
        object.__setattr__(self, "_correlation", (eigvecs * eigvals) @ eigvecs.T)
        object.__setattr__(self, "_root", eigvecs * np.sqrt(eigvals))
        object.__setattr__(
            self, "_pinv", (eigvecs[:, kept] / eigvals[kept]) @ eigvecs[:, kept].T
        )

    @classmethod
    def uniform(
        cls, grid: GridSpec, variance: float, correlation_length: float | None = None
    ) -> BackgroundCov:
        return cls(
            grid=grid,
            variances={s.key: variance for s in grid.slots()},
            correlation_length=correlation_length,
        )

    @property
    def diagonal(self) -> FloatArray:
        return self._diagonal

    @property
    def is_diagonal(self) -> bool:
        return self._correlation is None

    @property
    def correlation(self) -> FloatArray | None:
        """Cell-to-cell correlation shared by every slot, or None when diagonal."""
        return self._correlation

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def control_size(self) -> int:
        return self.grid.size

    def _blocks(self, v: FloatArray) -> FloatArray:
        return np.asarray(v, dtype=np.float64).reshape(-1, self.grid.n_cells)

    def _block_stds(self) -> FloatArray:
        return np.sqrt(self._blocks(self._diagonal)[:, 0])[:, None]

    def apply(self, v: FloatArray) -> FloatArray:
        correlation = self.correlation
        if correlation is None:
            return self._diagonal * v
        stds = self._block_stds()
        return (stds * ((stds * self._blocks(v)) @ correlation)).ravel()

    def inv_apply(self, v: FloatArray) -> FloatArray:
        active = self._diagonal > 0
        if self._pinv is None:
            out = np.zeros_like(v, dtype=np.float64)
            out[active] = v[active] / self._diagonal[active]
            return out
        stds = self._block_stds()
        inv_stds = np.divide(1.0, stds, out=np.zeros_like(stds), where=stds > 0)
        return (inv_stds * ((inv_stds * self._blocks(v)) @ self._pinv)).ravel()

    def sqrt_apply(self, w: FloatArray) -> FloatArray:
        if self._root is None:
            return np.sqrt(self._diagonal) * w
        return (self._block_stds() * (self._blocks(w) @ self._root.T)).ravel()

    def sqrt_adjoint(self, v: FloatArray) -> FloatArray:
        if self._root is None:
            return np.sqrt(self._diagonal) * v
        return ((self._block_stds() * self._blocks(v)) @ self._root).ravel()

    def columns(self, indices: NDArray[np.intp]) -> FloatArray:
        """B[:, indices] as a dense (m, p) matrix."""
        indices = np.asarray(indices, dtype=np.intp)
        out = np.zeros((self.size, indices.size))
        correlation = self.correlation
        if correlation is None:
            out[indices, np.arange(indices.size)] = self._diagonal[indices]
            return out
        n = self.grid.n_cells
        blocks, cells = np.divmod(indices, n)
        for block in np.unique(blocks):
            selected = blocks == block
            variance = self._diagonal[block * n]
            out[block * n : (block + 1) * n, selected] = variance * correlation[:, cells[selected]]
        return out

    def dense(self) -> FloatArray:
        correlation = self.correlation
        if correlation is None:
            return np.diag(self._diagonal)
        variances = self._blocks(self._diagonal)[:, 0]
        return block_diag(*[variance * correlation for variance in variances])

    def with_variances(
        self, variances: Mapping[SlotKey, float], correlation_length: float | None = None
    ) -> BackgroundCov:
        """Same grid, new slot variances; the correlation length is kept unless given."""
        length = self.correlation_length if correlation_length is None else correlation_length
        return BackgroundCov(grid=self.grid, variances=variances, correlation_length=length)

    def scaled(self, factor: float) -> BackgroundCov:
        return self.with_variances({key: factor * v for key, v in self.variances.items()})

    def to_dict(self) -> dict[str, Any]:
        """Flat {label: variance} when diagonal; variances plus the length otherwise."""
        variances = {slot.label: float(self.variances[slot.key]) for slot in self.grid.slots()}
        if self.correlation_length is None:
            return variances
        return {"variances": variances, "correlation_length": float(self.correlation_length)}

    @classmethod
    def from_dict(cls, grid: GridSpec, data: Mapping[str, Any]) -> BackgroundCov:
        length = data.get("correlation_length")
        variances = data["variances"] if "variances" in data else data
        return cls(
            grid=grid,
            variances={slot.key: float(variances[slot.label]) for slot in grid.slots()},
            correlation_length=None if length is None else float(length),
        )

    def hybridized(self, anomalies: FloatArray, beta: float) -> HybridCov:
        return HybridCov(static=self, anomalies=anomalies, beta=beta)


@dataclass(frozen=True, eq=False)
class EnsembleCov(CovarianceOperator):
    """P^e = X X^T from scaled anomalies X (m x N), never materialized."""

    anomalies: FloatArray

    @property
    def size(self) -> int:
        return int(self.anomalies.shape[0])

    @property
    def control_size(self) -> int:
        return int(self.anomalies.shape[1])

    def apply(self, v: FloatArray) -> FloatArray:
        return self.anomalies @ (self.anomalies.T @ v)

    def sqrt_apply(self, w: FloatArray) -> FloatArray:
        return self.anomalies @ w

    def sqrt_adjoint(self, v: FloatArray) -> FloatArray:
        return self.anomalies.T @ v

    def dense(self) -> FloatArray:
        return self.anomalies @ self.anomalies.T


@dataclass(frozen=True, eq=False)
class HybridCov(CovarianceOperator):
    """beta * B + (1 - beta) * P^e.

    The control vector is [v_s, w] with
    B_hyb^{1/2} [v_s, w] = sqrt(beta) B^{1/2} v_s + sqrt(1 - beta) X w.
    """

    static: CovarianceOperator
    anomalies: FloatArray
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"Hybrid weight beta must be in [0, 1], got {self.beta}")
        if self.anomalies.ndim != 2 or self.anomalies.shape[0] != self.static.size:
            raise DimensionError("Ensemble anomalies do not match the static covariance size.")

    @property
    def size(self) -> int:
        return self.static.size

    @property
    def control_size(self) -> int:
        return self.static.control_size + int(self.anomalies.shape[1])

    def apply(self, v: FloatArray) -> FloatArray:
        ensemble_part = self.anomalies @ (self.anomalies.T @ v)
        return self.beta * self.static.apply(v) + (1.0 - self.beta) * ensemble_part

    def sqrt_apply(self, w: FloatArray) -> FloatArray:
        n_static = self.static.control_size
        return np.sqrt(self.beta) * self.static.sqrt_apply(w[:n_static]) + np.sqrt(
            1.0 - self.beta
        ) * (self.anomalies @ w[n_static:])

    def sqrt_adjoint(self, v: FloatArray) -> FloatArray:
        return np.concatenate(
            [
                np.sqrt(self.beta) * self.static.sqrt_adjoint(v),
                np.sqrt(1.0 - self.beta) * (self.anomalies.T @ v),
            ]
        )


def hybrid_cov(b: CovarianceOperator, p_e: EnsembleCov, beta: float) -> HybridCov:
    """Operator v -> beta B v + (1 - beta) P^e v."""
    return HybridCov(static=b, anomalies=p_e.anomalies, beta=beta)


@dataclass(frozen=True)
class ObsCov:
    """Block-diagonal R: one sigma^2 I block per (variable, level)."""

    table: ObsErrorTable

    def blocks(self, operator: ObservationOperator) -> tuple[tuple[SlotKey, int, float], ...]:
        out = []
        for key, size in operator.slot_sizes:
            sigma = self.table.sigmas.get(key)
            if sigma is None:
                raise DimensionError(f"Observations present for unobserved slot {key}")
            out.append((key, size, float(sigma)))
        return tuple(out)

    def variances(self, operator: ObservationOperator) -> FloatArray:
        parts = [np.full(size, sigma**2) for _, size, sigma in self.blocks(operator)]
        return np.concatenate(parts) if parts else np.zeros(0)

    def dense(self, operator: ObservationOperator) -> FloatArray:
        return np.diag(self.variances(operator))
