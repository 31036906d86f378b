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
"""Analog combiner designs.

Every design returns a ``Combiner``: an N_rf × N_bs matrix tagged with
the feasible set it lives in.

The MSE-optimal complex-gain combiner is W = V D U*, where U holds the
N_rf leading eigenvectors of

    Q̄ = (αQ + p_n I)^{-1/2} (αQ)² (αQ + p_n I)^{-1/2}

and V (unitary), D (positive diagonal) are free. The phase-shifter-only
design exploits that freedom: it alternates between projecting V D U*
onto the unit-modulus matrices, an orthogonal Procrustes step for V and
a closed-form update of D, each of which can only decrease
‖W − V D U*‖_F. Freezing D at the identity gives the MaGiQ design;
the full design starts where MaGiQ stops.
"""

from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
import scipy.linalg as sla

from rfcombiner.channel_model import CorrelationModel
from rfcombiner.estimator import ObservationModel, explained_energy
from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.linalg import hermitian_eig, hermitian_solve
from rfcombiner.tracing import TraceEvent, trace_event

CombinerKindNames = (
    "complex_gain",
    "phase_only",
    "selection",
    "fully_digital",
)
CombinerKind = Enum("CombinerKind", CombinerKindNames)

DesignMethods = ("cgac", "psoac", "magiq", "selection", "fully_digital")

DEFAULT_DESIGN_OPTIONS: Dict[str, Any] = {
    "eta": 1e-6,
    "max_iters": 500,
    "tol": 1e-8,
    "magiq_mode": False,
}


class Combiner:
    """Combining matrix ``w`` of feasible-set ``kind``.

    ``design_meta`` records how the matrix was obtained: ``method``,
    and for alternating designs ``iterations``, ``residual`` and
    ``residual_history``.
    """

    def __init__(self, w: np.ndarray, kind: CombinerKind, design_meta: Optional[Dict[str, Any]] = None):
        w = np.atleast_2d(np.asarray(w, dtype=complex))
        n_rf, n_bs = w.shape
        if n_rf > n_bs:
            raise InvalidArgumentError(f"combiner has more rows ({n_rf}) than antennas ({n_bs})")
        if kind == CombinerKind.phase_only:
            if np.max(np.abs(np.abs(w) - 1.0)) > 1e-12:
                raise InvalidArgumentError("phase-only combiner has entries off the unit circle")
        elif kind == CombinerKind.selection:
            nonzero = np.abs(w) > 0
            if not (np.all(nonzero.sum(axis=1) == 1) and np.all(w[nonzero] == 1.0)):
                raise InvalidArgumentError("selection combiner rows must be standard basis vectors")
            if len(set(np.argmax(nonzero, axis=1))) != n_rf:
                raise InvalidArgumentError("selection combiner selects an antenna twice")
        elif kind == CombinerKind.fully_digital:
            if n_rf != n_bs or not np.array_equal(w, np.eye(n_bs)):
                raise InvalidArgumentError("fully-digital combiner must be the identity")
        self.w = w
        self.kind = kind
        self.design_meta = dict(design_meta or {})

    @property
    def n_rf(self) -> int:
        return self.w.shape[0]

    @property
    def n_bs(self) -> int:
        return self.w.shape[1]

    def replace(self, w: np.ndarray, **meta) -> "Combiner":
        """Same kind and metadata, new matrix."""
        design_meta = dict(self.design_meta)
        design_meta.update(meta)
        return Combiner(w, self.kind, design_meta)

    def __repr__(self):
        method = self.design_meta.get("method", self.kind.name)
        return f"<Combiner {method} {self.n_rf}x{self.n_bs}>"

    pass


class AlternatingState:
    """Iterate of the alternating phase-only design."""

    def __init__(self, w: np.ndarray, v: np.ndarray, d: np.ndarray, u: np.ndarray, eta: float):
        self.w = w
        self.v = v
        self.d = d
        self.u = u
        self.eta = eta

    def target(self) -> np.ndarray:
        return self.v @ self.d @ self.u.conj().T

    def residual(self) -> float:
        return float(np.linalg.norm(self.w - self.target()))

    pass


def q_bar(q: np.ndarray, alpha: float, p_n: float) -> np.ndarray:
    """(αQ + p_n I)^{-1/2}(αQ)²(αQ + p_n I)^{-1/2}, built on the
    eigendecomposition of Q. For p_n = 0 this is αQ."""
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be positive; got {alpha}")
    if p_n < 0:
        raise InvalidArgumentError(f"noise variance must be nonnegative; got {p_n}")
    w, v = hermitian_eig(q)
    lam = alpha * np.clip(w, 0.0, None)
    denominator = lam + p_n
    scaled = np.divide(lam**2, denominator, out=np.zeros_like(lam), where=denominator > 0)
    return (v * scaled) @ v.conj().T


def _dft(n: int) -> np.ndarray:
    return np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / np.sqrt(n)


def top_eigenvectors(q_matrix: np.ndarray, n_rf: int) -> np.ndarray:
    """N_bs × n_rf matrix of leading eigenvectors of ``q_matrix``.

    Inside a cluster of equal eigenvalues (relative gap below 1e-10) the
    basis is mixed with a DFT so that every column spreads over the
    whole eigenspace; otherwise e.g. Q = I would start the phase-only
    design from the rank-one projection of the identity.
    """
    w, v = hermitian_eig(q_matrix)
    scale = max(abs(float(w[0])), np.finfo(float).tiny)
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and abs(w[stop] - w[start]) <= 1e-10 * scale:
            stop += 1
        if stop - start > 1:
            v[:, start:stop] = v[:, start:stop] @ _dft(stop - start)
        start = stop
    return v[:, :n_rf]


def _check_n_rf(n_rf: int, n_bs: int):
    if not 1 <= n_rf <= n_bs:
        raise InvalidArgumentError(f"n_rf must lie in [1, {n_bs}]; got {n_rf}")


def _as_diagonal(d, n_rf: int) -> np.ndarray:
    d = np.asarray(d)
    diagonal = np.diag(d) if d.ndim == 2 else d
    if diagonal.shape != (n_rf,):
        raise InvalidArgumentError(f"D must have {n_rf} diagonal entries")
    if np.any(np.real(diagonal) <= 0) or np.any(np.imag(diagonal) != 0):
        raise InvalidArgumentError("D must have positive real diagonal entries")
    return np.diag(np.real(diagonal)).astype(complex)


def optimal_cgac(
    correlation: CorrelationModel,
    p_n: float,
    n_rf: int,
    v: Optional[np.ndarray] = None,
    d: Optional[np.ndarray] = None,
) -> Combiner:
    """W^o = V D U^o*. V and D default to the identity."""
    _check_n_rf(n_rf, correlation.n_bs)
    u = top_eigenvectors(q_bar(correlation.q, correlation.alpha, p_n), n_rf)
    v = np.eye(n_rf, dtype=complex) if v is None else np.asarray(v, dtype=complex)
    if v.shape != (n_rf, n_rf) or np.linalg.norm(v.conj().T @ v - np.eye(n_rf)) > 1e-8:
        raise InvalidArgumentError(f"V must be a {n_rf}x{n_rf} unitary matrix")
    d = np.eye(n_rf, dtype=complex) if d is None else _as_diagonal(d, n_rf)
    w = v @ d @ u.conj().T
    combiner = Combiner(w, CombinerKind.complex_gain, {"method": "cgac"})
    trace_event(TraceEvent.design, method="cgac", n_bs=correlation.n_bs, n_rf=n_rf, p_n=p_n)
    return combiner


def objective_f(w, model: ObservationModel, method: str = "kronecker") -> float:
    """The trace term tr((P S* ⊗ Q W*) G⁻¹ (S P ⊗ W Q)) for combiner
    ``w`` under the pilots, statistics and noise of ``model``; the MSE
    is tr(P ⊗ Q) minus this value."""
    trial = ObservationModel(w, model.pilots, model.correlation, model.p_n)
    return explained_energy(trial, method)


def reduced_objective(u_tilde: np.ndarray, q: np.ndarray, alpha: float, p_n: float, k: int = 1) -> float:
    """K·tr(Ũ* α²Q² Ũ [Ũ*(αQ + p_n I)Ũ]⁻¹) for Ũ with orthonormal
    columns spanning the row space of the combiner."""
    u_tilde = np.atleast_2d(np.asarray(u_tilde, dtype=complex))
    gram = u_tilde.conj().T @ u_tilde
    if np.linalg.norm(gram - np.eye(gram.shape[0])) > 1e-8:
        raise InvalidArgumentError("reduced objective needs orthonormal columns")
    aq = alpha * np.asarray(q, dtype=complex)
    numerator = u_tilde.conj().T @ aq @ aq @ u_tilde
    denominator = u_tilde.conj().T @ (aq + p_n * np.eye(aq.shape[0])) @ u_tilde
    return float(k * np.real(np.trace(hermitian_solve(denominator, numerator))))


def project_unit_modulus(m: np.ndarray) -> np.ndarray:
    """Entrywise m/|m|; zero entries map to 1."""
    m = np.asarray(m, dtype=complex)
    magnitude = np.abs(m)
    return np.where(magnitude > 0, m / np.where(magnitude > 0, magnitude, 1.0), 1.0 + 0j)


def procrustes_v(w: np.ndarray, u: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Unitary V minimizing ‖W − V D U*‖_F: V = L R* from the SVD
    W U D = L Σ R*."""
    m = np.asarray(w) @ np.asarray(u) @ np.asarray(d)
    left, _, right_h = sla.svd(m)
    return left @ right_h


def update_d(w: np.ndarray, v: np.ndarray, u: np.ndarray, eta: float) -> np.ndarray:
    """Diagonal D minimizing ‖W − V D U*‖_F subject to D ≥ η."""
    if not eta > 0:
        raise InvalidArgumentError(f"eta must be positive; got {eta}")
    wv = np.asarray(w).conj().T @ np.asarray(v)
    u = np.asarray(u)
    correlation = np.real(np.sum(wv.conj() * u, axis=0))
    norms = np.sum(np.abs(u) ** 2, axis=0)
    return np.diag(np.maximum(correlation / norms, eta)).astype(complex)


def _span_objective(w: np.ndarray, q: np.ndarray, alpha: float, p_n: float) -> float:
    return reduced_objective(sla.orth(w.conj().T), q, alpha, p_n)


def alternate(
    state: AlternatingState,
    max_iters: int,
    tol: float,
    update_diagonal: bool,
    method: str,
    score=None,
):
    """Run the W, V (and with ``update_diagonal`` D) steps on ``state``
    in place until the relative residual decrease drops below ``tol``.

    Returns ``(history, converged, best)``. ``best`` is None unless
    ``score`` is given; then it is ``(score, w, d, residual)`` for the
    highest-scoring iterate, the incoming ``state`` included.
    """
    history = []
    converged = False
    best = None
    if score is not None and state.w is not None:
        best = (score(state.w), state.w, state.d, state.residual())
    for iteration in range(1, max_iters + 1):
        state.w = project_unit_modulus(state.target())
        state.v = procrustes_v(state.w, state.u, state.d)
        if update_diagonal:
            state.d = update_d(state.w, state.v, state.u, state.eta)
        residual = state.residual()
        trace_event(TraceEvent.iteration, method=method, iteration=iteration, residual=residual)
        if score is not None:
            value = score(state.w)
            if best is None or value > best[0]:
                best = (value, state.w, state.d, residual)
        if history:
            previous = history[-1]
            history.append(residual)
            if previous == 0.0 or (previous - residual) < tol * previous:
                converged = True
                break
        else:
            history.append(residual)
            if residual == 0.0:
                converged = True
                break
    return history, converged, best


def design_psoac(
    correlation: CorrelationModel,
    p_n: float,
    n_rf: int,
    options: Optional[Dict[str, Any]] = None,
) -> Combiner:
    """Phase-shifter-only combiner by alternating minimization.

    Both designs start from V = F (the n_rf-point DFT) and D = I, so
    the first projection P(F U*) has genuinely complex phases even when
    U is real. MaGiQ alternates W and V with D = I. The full design
    continues from the MaGiQ fixed point with D free and keeps the
    iterate whose row space explains the most channel energy; the
    MaGiQ point is one of the candidates, so its MSE is never worse.

    ``options`` may set ``eta``, ``max_iters`` (per stage), ``tol`` and
    ``magiq_mode``; see ``DEFAULT_DESIGN_OPTIONS``.
    """
    opts = DEFAULT_DESIGN_OPTIONS.copy()
    if options:
        opts.update({key: value for key, value in options.items() if value is not None})
    eta, max_iters, tol = float(opts["eta"]), int(opts["max_iters"]), float(opts["tol"])
    magiq_mode = bool(opts["magiq_mode"])
    if max_iters < 1:
        raise InvalidArgumentError(f"max_iters must be at least 1; got {max_iters}")
    if not eta > 0:
        raise InvalidArgumentError(f"eta must be positive; got {eta}")
    _check_n_rf(n_rf, correlation.n_bs)
    method = "magiq" if magiq_mode else "psoac"

    u = top_eigenvectors(q_bar(correlation.q, correlation.alpha, p_n), n_rf)
    state = AlternatingState(None, _dft(n_rf), np.eye(n_rf, dtype=complex), u, eta)
    history, converged, _ = alternate(state, max_iters, tol, False, method)
    magiq_iterations = len(history)
    w, d, residual = state.w, state.d, history[-1]

    if not magiq_mode:

        def score(candidate):
            return _span_objective(candidate, correlation.q, correlation.alpha, p_n)

        more, converged, best = alternate(state, max_iters, tol, True, method, score)
        history += more
        _, w, d, residual = best

    meta = {
        "method": method,
        "iterations": len(history),
        "magiq_iterations": magiq_iterations,
        "residual": residual,
        "residual_history": history,
        "converged": converged,
        "eta": eta,
        "d": np.real(np.diag(d)).copy(),
    }
    trace_event(
        TraceEvent.design, method=method, n_bs=correlation.n_bs, n_rf=n_rf, p_n=p_n,
        iterations=len(history), residual=residual,
    )
    return Combiner(w, CombinerKind.phase_only, meta)


def random_selection(n_bs: int, n_rf: int, rng: np.random.Generator) -> Combiner:
    """n_rf distinct antennas, uniformly without replacement."""
    _check_n_rf(n_rf, n_bs)
    rows = rng.choice(n_bs, size=n_rf, replace=False)
    w = np.eye(n_bs, dtype=complex)[rows]
    trace_event(TraceEvent.design, method="selection", n_bs=n_bs, n_rf=n_rf)
    return Combiner(w, CombinerKind.selection, {"method": "selection", "antennas": sorted(int(r) for r in rows)})


def fully_digital(n_bs: int) -> Combiner:
    if n_bs < 1:
        raise InvalidArgumentError(f"n_bs must be at least 1; got {n_bs}")
    return Combiner(np.eye(n_bs, dtype=complex), CombinerKind.fully_digital, {"method": "fully_digital"})


def design_combiner(
    method: str,
    correlation: CorrelationModel,
    p_n: float,
    n_rf: int,
    rng: Optional[np.random.Generator] = None,
    options: Optional[Dict[str, Any]] = None,
) -> Combiner:
    """Build the combiner named by ``method`` (one of ``DesignMethods``)."""
    if method == "cgac":
        return optimal_cgac(correlation, p_n, n_rf)
    if method in ("psoac", "magiq"):
        opts = dict(options or {})
        opts["magiq_mode"] = method == "magiq" or bool(opts.get("magiq_mode"))
        return design_psoac(correlation, p_n, n_rf, opts)
    if method == "selection":
        if rng is None:
            raise InvalidArgumentError("random selection needs a random stream")
        return random_selection(correlation.n_bs, n_rf, rng)
    if method == "fully_digital":
        return fully_digital(correlation.n_bs)
    raise InvalidArgumentError(
        f"unknown design method {method!r}; expected one of {', '.join(DesignMethods)}"
    )


if __name__ == "__main__":
    from rfcombiner.channel_model import jakes_model

    model = jakes_model(16, 0.2)
    combiner = design_psoac(model, 0.1, 4)
    print(combiner, combiner.design_meta["iterations"], combiner.design_meta["residual"])
    print(optimal_cgac(model, 0.1, 4).w.shape)
