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
"""Hermitian linear-algebra helpers shared by the model, estimator and
design modules."""

from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from rfcombiner.tracing import TraceEvent, trace_event

# Gram matrices with a larger 2-norm condition number are rejected.
MAX_CONDITION = 1e12

# Relative tolerance for numerical rank and pseudo-inverses.
RANK_RTOL = 1e-10


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def is_hermitian(m: np.ndarray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol * scale)


def normalize_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate every column so its largest-magnitude entry is real and
    positive. Ties in magnitude go to the lowest row index."""
    vectors = np.array(vectors, dtype=complex, copy=True)
    if vectors.size == 0:
        return vectors
    rows = np.argmax(np.round(np.abs(vectors), 12), axis=0)
    pivots = vectors[rows, np.arange(vectors.shape[1])]
    phases = np.where(np.abs(pivots) > 0, pivots / np.abs(pivots), 1.0)
    return vectors / phases[np.newaxis, :]


def hermitian_eig(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Eigenvalues come back in descending order. Eigenvectors have their
    phase normalized (see ``normalize_phases``); ties between equal
    eigenvalues are broken lexicographically on the rounded eigenvector
    entries so the ordering is reproducible.
    """
    w, v = sla.eigh(hermitian_part(np.asarray(m, dtype=complex)))
    v = normalize_phases(v)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    rounded_w = np.round(w / scale, 12)

    def sort_key(i: int):
        entries = np.round(v[:, i], 8)
        return (-rounded_w[i],) + tuple(
            x for z in entries for x in (-z.real, -z.imag)
        )

    order = sorted(range(len(w)), key=sort_key)
    return w[order], v[:, order]


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL) -> int:
    s = sla.svdvals(np.atleast_2d(m))
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def condition_number(m: np.ndarray) -> float:
    s = sla.svdvals(m)
    if s.size == 0:
        return 1.0
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def hermitian_solve(
    a: np.ndarray, b: np.ndarray, method: Optional[str] = None
) -> np.ndarray:
    """Solve ``a x = b`` for Hermitian positive (semi)definite ``a``.

    Tries Cholesky first; on failure falls back to the pivoted LDL*
    (Bunch-Kaufman) solver, and then to Cholesky with a jitter of
    1e-12·tr(a)/N on the diagonal. Every fallback is reported as a
    ``solve_fallback`` trace event.
    """
    a = hermitian_part(np.asarray(a, dtype=complex))
    try:
        factor = sla.cho_factor(a, lower=True, check_finite=False)
        return sla.cho_solve(factor, b, check_finite=False)
    except sla.LinAlgError:
        pass

    trace_event(TraceEvent.solve_fallback, method=method, solver="ldl", n=a.shape[0])
    try:
        return sla.solve(a, b, assume_a="her", check_finite=False)
    except sla.LinAlgError:
        pass

    n = a.shape[0]
    jitter = 1e-12 * float(np.real(np.trace(a))) / n
    trace_event(TraceEvent.solve_fallback, method=method, solver="jitter", jitter=jitter, n=n)
    factor = sla.cho_factor(a + jitter * np.eye(n), lower=True, check_finite=False)
    return sla.cho_solve(factor, b, check_finite=False)


def pinv_solve(a: np.ndarray, b: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Minimum-norm solution through the Hermitian pseudo-inverse,
    discarding eigenvalues below rtol·λ_max."""
    return sla.pinvh(hermitian_part(np.asarray(a, dtype=complex)), rtol=rtol) @ b


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n×n unitary (QR of a complex Gaussian with the
    diagonal phases of R removed)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[np.newaxis, :]
