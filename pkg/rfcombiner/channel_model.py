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
"""Statistical channel model.

Channels follow the Kronecker model H = Q^{1/2} H̄ P^{1/2}, with H̄ an
N_bs × K matrix of i.i.d. CN(0, 1) entries, receive correlation Q and
transmit correlation P = α·I_K. Pilots are K orthonormal columns of
length τ and the noise is i.i.d. CN(0, p_n).
"""

from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg as sla
from scipy.special import j0

from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.linalg import (
    hermitian_eig,
    hermitian_part,
    is_hermitian,
    normalize_phases,
)
from rfcombiner.lib.rng import complex_gaussian

RecipeNames = (
    "jakes",  # Bessel-kernel Toeplitz correlation of a uniform linear array
    "random_low_rank",  # Q̃Q̃* with an N_bs × n_q Gaussian Q̃
    "identity",  # uncorrelated antennas
    "explicit",  # a matrix handed in by the caller
)
Recipe = Enum("Recipe", RecipeNames)


def snr_db_to_noise_variance(snr_db: float) -> float:
    """With unit-power pilots SNR = 1/p_n."""
    return float(10.0 ** (-snr_db / 10.0))


class CorrelationModel:
    """Receive correlation ``q``, transmit scale ``alpha`` and the
    recipe that produced ``q``.

    ``parameter`` is the antenna spacing for Jakes models and the
    generating rank n_q for random low-rank models.
    """

    def __init__(
        self,
        q: np.ndarray,
        alpha: float = 1.0,
        recipe: Recipe = Recipe.explicit,
        parameter: Optional[float] = None,
    ):
        q = np.array(q, dtype=complex, copy=True)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 1:
            raise InvalidArgumentError(f"correlation must be a nonempty square matrix; got shape {q.shape}")
        if not is_hermitian(q):
            raise InvalidArgumentError("correlation matrix is not Hermitian")
        if not alpha > 0:
            raise InvalidArgumentError(f"alpha must be positive; got {alpha}")

        w, v = hermitian_eig(q)
        scale = max(1.0, float(w[0]))
        if w[-1] < -1e-10 * scale:
            raise InvalidArgumentError(
                f"correlation matrix is not positive semidefinite; smallest eigenvalue {w[-1]:.3g}"
            )

        self.q = hermitian_part(q)
        self.alpha = float(alpha)
        self.recipe = recipe
        self.parameter = parameter
        self.eigenvalues = np.clip(w, 0.0, None)
        self.eigenvectors = v
        self._sqrt = None

    @property
    def n_bs(self) -> int:
        return self.q.shape[0]

    @property
    def sqrt(self) -> np.ndarray:
        if self._sqrt is None:
            self._sqrt = (self.eigenvectors * np.sqrt(self.eigenvalues)) @ self.eigenvectors.conj().T
        return self._sqrt

    @property
    def rank(self) -> int:
        """Numerical rank at 1e-8·λ_max."""
        if self.eigenvalues[0] <= 0.0:
            return 0
        return int(np.sum(self.eigenvalues > 1e-8 * self.eigenvalues[0]))

    def channel_energy(self, k: int) -> float:
        """E‖h‖² = tr(P ⊗ Q) = K·α·tr(Q)."""
        return float(k * self.alpha * np.real(np.trace(self.q)))

    def describe(self) -> str:
        if self.recipe == Recipe.jakes:
            return f"jakes(spacing={self.parameter:g})"
        if self.recipe == Recipe.random_low_rank:
            return f"random_low_rank(n_q={int(self.parameter)})"
        return self.recipe.name

    def __repr__(self):
        return f"<CorrelationModel {self.describe()} n_bs={self.n_bs} alpha={self.alpha:g}>"

    pass


class ChannelRealization(NamedTuple):
    """One Monte-Carlo trial: channel, noise and pilots."""

    h_mat: np.ndarray  # N_bs × K
    noise: np.ndarray  # N_bs × τ
    pilots: np.ndarray  # τ × K


def jakes_correlation(n_bs: int, spacing: float) -> np.ndarray:
    """Toeplitz matrix with entries J₀(2π·spacing·|m − n|).

    ``spacing`` is the antenna spacing in carrier wavelengths.
    """
    if n_bs < 1:
        raise InvalidArgumentError(f"n_bs must be at least 1; got {n_bs}")
    if not spacing > 0:
        raise InvalidArgumentError(f"antenna spacing must be positive; got {spacing}")
    column = j0(2.0 * np.pi * spacing * np.arange(n_bs))
    return sla.toeplitz(column).astype(complex)


def random_low_rank_correlation(n_bs: int, n_q: int, rng: np.random.Generator) -> np.ndarray:
    if n_bs < 1:
        raise InvalidArgumentError(f"n_bs must be at least 1; got {n_bs}")
    if not 1 <= n_q <= n_bs:
        raise InvalidArgumentError(f"n_q must lie in [1, {n_bs}]; got {n_q}")
    q_tilde = complex_gaussian(rng, (n_bs, n_q))
    return hermitian_part(q_tilde @ q_tilde.conj().T)


def jakes_model(n_bs: int, spacing: float, alpha: float = 1.0) -> CorrelationModel:
    return CorrelationModel(jakes_correlation(n_bs, spacing), alpha, Recipe.jakes, spacing)


def random_low_rank_model(n_bs: int, n_q: int, rng: np.random.Generator, alpha: float = 1.0) -> CorrelationModel:
    q = random_low_rank_correlation(n_bs, n_q, rng)
    return CorrelationModel(q, alpha, Recipe.random_low_rank, n_q)


def identity_model(n_bs: int, alpha: float = 1.0) -> CorrelationModel:
    if n_bs < 1:
        raise InvalidArgumentError(f"n_bs must be at least 1; got {n_bs}")
    return CorrelationModel(np.eye(n_bs, dtype=complex), alpha, Recipe.identity)


def sample_channel(model: CorrelationModel, k: int, rng: np.random.Generator) -> np.ndarray:
    """One N_bs × K draw of Q^{1/2} H̄ √α."""
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1; got {k}")
    h_bar = complex_gaussian(rng, (model.n_bs, k))
    return np.sqrt(model.alpha) * (model.sqrt @ h_bar)


def sample_channels(model: CorrelationModel, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent draws stacked along the first axis."""
    if k < 1 or count < 1:
        raise InvalidArgumentError(f"k and count must be at least 1; got k={k}, count={count}")
    h_bar = complex_gaussian(rng, (count, model.n_bs, k))
    return np.sqrt(model.alpha) * np.matmul(model.sqrt, h_bar)


def generate_pilots(tau: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """τ × K pilots with orthonormal columns.

    The columns are the K leading eigenvectors of (A + A*)/2 for a
    τ × τ matrix A of i.i.d. CN(0, 1) entries.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1; got {k}")
    if tau < k:
        raise InvalidArgumentError(f"tau must be at least k; got tau={tau}, k={k}")
    a = complex_gaussian(rng, (tau, tau))
    _, v = sla.eigh(hermitian_part(a))
    # eigh sorts ascending
    return normalize_phases(v[:, ::-1][:, :k])


def sample_noise(n_bs: int, tau: int, p_n: float, rng: np.random.Generator) -> np.ndarray:
    if p_n < 0:
        raise InvalidArgumentError(f"noise variance must be nonnegative; got {p_n}")
    if p_n == 0:
        return np.zeros((n_bs, tau), dtype=complex)
    return complex_gaussian(rng, (n_bs, tau), variance=p_n)


def draw_realization(
    model: CorrelationModel, k: int, tau: int, p_n: float, rng: np.random.Generator
) -> ChannelRealization:
    """Channel, then pilots, then noise, all from ``rng``."""
    h_mat = sample_channel(model, k, rng)
    pilots = generate_pilots(tau, k, rng)
    noise = sample_noise(model.n_bs, tau, p_n, rng)
    return ChannelRealization(h_mat, noise, pilots)


if __name__ == "__main__":
    from rfcombiner.lib.rng import make_rng

    rng = make_rng(7)
    print(jakes_correlation(3, 0.2).real)
    model = random_low_rank_model(8, 4, rng)
    print(model, "rank", model.rank)
    print(np.round(generate_pilots(3, 3, rng), 3))
    print(np.round(model.sqrt, 3))
