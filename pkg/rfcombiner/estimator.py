# -*- coding: utf-8 -*-
#   Copyright (C) 2025 The RF-Combiner Team
#
#   This program is free software: you can redistribute it and/or modify
#   it under the terms of the GNU General Public License as published by
#   the Free Software Foundation, either version 3 of the License, or
#   (at your option) any later version.
#
#   This program is distributed in the hope that it will be useful,
#   but WITHOUT ANY WARRANTY; without even the implied warranty of
#   MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#   GNU General Public License for more details.
#
#   You should have received a copy of the GNU General Public License
#   along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""Linear MMSE channel estimation behind an analog combiner.

The observation of one trial is

    Y = W H Sᵀ + W N,    y = vec(Y) = (S ⊗ W) vec(H) + (I_τ ⊗ W) vec(N)

with column-major ``vec``. Two equivalent ways of computing the estimate
and its mean squared error are provided:

``"kronecker"``
    the literal vectorized formula with the (N_rf·τ)-square Gram matrix
    (S P S* ⊗ W Q W*) + p_n (I_τ ⊗ W W*);

``"structured"``
    the reduction that holds when P = αI and S has orthonormal columns:
    Ĥ = α Q W* A⁻¹ Y conj(S) with the N_rf-square A = W(αQ + p_n I)W*.
"""

from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from rfcombiner.channel_model import CorrelationModel
from rfcombiner.lib.exception import (
    DegenerateTrialError,
    DimensionMismatchError,
    InvalidArgumentError,
    SingularModelError,
)
from rfcombiner.lib.linalg import (
    MAX_CONDITION,
    condition_number,
    hermitian_solve,
    numerical_rank,
    pinv_solve,
)

EstimatorMethods = ("kronecker", "structured")


def _combiner_matrix(combiner) -> np.ndarray:
    return np.atleast_2d(np.asarray(getattr(combiner, "w", combiner), dtype=complex))


def _combiner_kind(combiner) -> Optional[str]:
    kind = getattr(combiner, "kind", None)
    return None if kind is None else kind.name


class ObservationModel:
    """Combiner, pilots, channel statistics and noise variance of a
    measurement.

    Quantities that do not depend on the pilots are cached and shared
    with the copies made by ``with_pilots``.
    """

    def __init__(self, combiner, pilots: np.ndarray, correlation: CorrelationModel, p_n: float,
                 _cache: Optional[Dict[str, Any]] = None):
        w = _combiner_matrix(combiner)
        pilots = np.atleast_2d(np.asarray(pilots, dtype=complex))
        if w.shape[1] != correlation.n_bs:
            raise DimensionMismatchError(
                f"combiner has {w.shape[1]} columns but the array has {correlation.n_bs} antennas"
            )
        if pilots.shape[0] < pilots.shape[1]:
            raise InvalidArgumentError(
                f"pilot matrix must have tau >= k; got shape {pilots.shape}"
            )
        if p_n < 0:
            raise InvalidArgumentError(f"noise variance must be nonnegative; got {p_n}")

        self.combiner = combiner
        self.w = w
        self.kind = _combiner_kind(combiner)
        self.pilots = pilots
        self.correlation = correlation
        self.p_n = float(p_n)
        if _cache is None:
            if numerical_rank(w) < w.shape[0]:
                raise SingularModelError(
                    f"combiner ({self.kind or 'matrix'}) does not have full row rank {w.shape[0]}",
                    kind=self.kind,
                    combiner=w,
                )
            _cache = {}
        self._cache = _cache

    @property
    def n_rf(self) -> int:
        return self.w.shape[0]

    @property
    def n_bs(self) -> int:
        return self.w.shape[1]

    @property
    def tau(self) -> int:
        return self.pilots.shape[0]

    @property
    def k(self) -> int:
        return self.pilots.shape[1]

    def with_pilots(self, pilots: np.ndarray) -> "ObservationModel":
        return ObservationModel(self.combiner, pilots, self.correlation, self.p_n, _cache=self._cache)

    def gram(self) -> np.ndarray:
        """Covariance of y: α(S S*) ⊗ (W Q W*) + p_n (I_τ ⊗ W W*)."""
        w, s, q = self.w, self.pilots, self.correlation.q
        alpha = self.correlation.alpha
        wqw = w @ q @ w.conj().T
        ww = w @ w.conj().T
        return alpha * np.kron(s @ s.conj().T, wqw) + self.p_n * np.kron(np.eye(self.tau), ww)

    def cross_covariance(self) -> np.ndarray:
        """E{h y*} = α S* ⊗ Q W*."""
        alpha = self.correlation.alpha
        return alpha * np.kron(self.pilots.conj().T, self.correlation.q @ self.w.conj().T)

    def reduced_gram(self) -> np.ndarray:
        """A = W(αQ + p_n I)W*."""
        if "reduced_gram" not in self._cache:
            q = self.correlation.alpha * self.correlation.q + self.p_n * np.eye(self.n_bs)
            self._cache["reduced_gram"] = self.w @ q @ self.w.conj().T
        return self._cache["reduced_gram"]

    def structured_gain(self) -> np.ndarray:
        """G = α Q W* A⁻¹, so that Ĥ = G Y conj(S)."""
        if "structured_gain" not in self._cache:
            a = self.reduced_gram()
            b = self.correlation.alpha * (self.w @ self.correlation.q)
            # A is Hermitian: α Q W* A⁻¹ = (A⁻¹ α W Q)*
            self._cache["structured_gain"] = self.solve(a, b).conj().T
        return self._cache["structured_gain"]

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a⁻¹ b`` for a Gram matrix ``a`` of this model."""
        condition = condition_number(a)
        if condition > MAX_CONDITION:
            if self.p_n == 0.0:
                return pinv_solve(a, b)
            raise SingularModelError(
                f"Gram matrix of the {self.kind or 'given'} combiner has condition number "
                f"{condition:.3g} > {MAX_CONDITION:g}",
                kind=self.kind,
                combiner=self.w,
                condition=condition,
            )
        return hermitian_solve(a, b, method=self.kind)

    def __repr__(self):
        return (
            f"<ObservationModel n_bs={self.n_bs} n_rf={self.n_rf} k={self.k} "
            f"tau={self.tau} p_n={self.p_n:g}>"
        )

    pass


class EstimationResult(NamedTuple):
    h_hat: np.ndarray
    per_trial_nmse: float
    analytic_mse: float


def _check_method(method: str):
    if method not in EstimatorMethods:
        raise InvalidArgumentError(
            f"unknown estimator method {method!r}; expected one of {', '.join(EstimatorMethods)}"
        )


def observe(model: ObservationModel, h_mat: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """y = vec(W H Sᵀ + W N), column-major."""
    h_mat = np.atleast_2d(np.asarray(h_mat, dtype=complex))
    noise = np.atleast_2d(np.asarray(noise, dtype=complex))
    if h_mat.shape != (model.n_bs, model.k):
        raise DimensionMismatchError(
            f"channel has shape {h_mat.shape}; expected {(model.n_bs, model.k)}"
        )
    if noise.shape != (model.n_bs, model.tau):
        raise DimensionMismatchError(
            f"noise has shape {noise.shape}; expected {(model.n_bs, model.tau)}"
        )
    y_mat = model.w @ h_mat @ model.pilots.T + model.w @ noise
    return y_mat.reshape(-1, order="F")


def mmse_estimate(model: ObservationModel, y: np.ndarray, method: str = "kronecker") -> np.ndarray:
    """Linear MMSE estimate of vec(H) from the observation ``y``."""
    _check_method(method)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if y.shape[0] != model.n_rf * model.tau:
        raise DimensionMismatchError(
            f"observation has {y.shape[0]} entries; expected {model.n_rf * model.tau}"
        )
    if method == "structured":
        y_mat = y.reshape((model.n_rf, model.tau), order="F")
        h_hat = model.structured_gain() @ y_mat @ model.pilots.conj()
        return h_hat.reshape(-1, order="F")
    return model.cross_covariance() @ model.solve(model.gram(), y)


def explained_energy(model: ObservationModel, method: str = "kronecker") -> float:
    """The trace term removed from tr(P ⊗ Q) by estimation:
    tr((P S* ⊗ Q W*) G⁻¹ (S P ⊗ W Q))."""
    _check_method(method)
    if method == "structured":
        # K·α²·tr(Q W* A⁻¹ W Q) = K·α·tr(G W Q)
        gain = model.structured_gain()
        value = model.k * model.correlation.alpha * np.trace(gain @ model.w @ model.correlation.q)
        return float(np.real(value))
    c = model.cross_covariance()
    return float(np.real(np.trace(c @ model.solve(model.gram(), c.conj().T))))


def analytic_mse(model: ObservationModel, method: str = "kronecker") -> float:
    """ε = tr(P ⊗ Q) − tr((P S* ⊗ Q W*) G⁻¹ (S P ⊗ W Q))."""
    total = model.correlation.channel_energy(model.k)
    return float(min(max(total - explained_energy(model, method), 0.0), total))


def normalized_mse(h: np.ndarray, h_hat: np.ndarray) -> float:
    """‖h − ĥ‖² / ‖h‖²."""
    h = np.asarray(h).reshape(-1, order="F")
    h_hat = np.asarray(h_hat).reshape(-1, order="F")
    if h.shape != h_hat.shape:
        raise DimensionMismatchError(f"lengths differ: {h.shape[0]} and {h_hat.shape[0]}")
    energy = float(np.vdot(h, h).real)
    if energy == 0.0:
        raise DegenerateTrialError("channel realization has zero norm")
    error = h - h_hat
    return float(np.vdot(error, error).real) / energy


def estimate_trial(model: ObservationModel, h_mat: np.ndarray, noise: np.ndarray,
                   method: str = "structured") -> EstimationResult:
    """Observe, estimate and score one trial."""
    y = observe(model, h_mat, noise)
    h_hat = mmse_estimate(model, y, method)
    h = np.asarray(h_mat).reshape(-1, order="F")
    return EstimationResult(h_hat, normalized_mse(h, h_hat), analytic_mse(model, method))
