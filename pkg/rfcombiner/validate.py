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
"""Invariant suite run by the ``validate`` command.

Each check takes a random stream and returns ``(passed, detail)``. The
instances are small so the whole suite finishes in seconds.
"""

from typing import Callable, List, NamedTuple, Tuple

import mpmath
import numpy as np
from scipy.stats import unitary_group

from rfcombiner.channel_model import (
    CorrelationModel,
    generate_pilots,
    identity_model,
    jakes_correlation,
    random_low_rank_model,
    sample_channel,
    sample_noise,
)
from rfcombiner.combiner_design import (
    design_psoac,
    objective_f,
    optimal_cgac,
    procrustes_v,
    q_bar,
    reduced_objective,
    top_eigenvectors,
    update_d,
)
from rfcombiner.estimator import ObservationModel, analytic_mse, mmse_estimate, observe
from rfcombiner.hardware_emulation import quantize_phases
from rfcombiner.lib.rng import complex_gaussian, make_rng
from rfcombiner.virtual_extension import apply_sequential, partition

CheckOutcome = Tuple[bool, str]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_jakes_kernel(rng) -> CheckOutcome:
    q = jakes_correlation(6, 0.2).real
    worst = 0.0
    for lag in range(6):
        reference = float(mpmath.besselj(0, 2 * mpmath.pi * 0.2 * lag))
        worst = max(worst, abs(q[0, lag] - reference))
    return worst < 1e-12, f"max |J0 - mpmath| = {worst:.2e}"


def check_scalar_wiener(rng) -> CheckOutcome:
    model = ObservationModel(np.ones((1, 1)), np.ones((1, 1)), identity_model(1), 1.0)
    mse = analytic_mse(model)
    estimate = mmse_estimate(model, np.array([2.0 + 4.0j]))[0]
    passed = abs(mse - 0.5) <= 1e-12 and abs(estimate - (1.0 + 2.0j)) <= 1e-12
    return passed, f"mse={mse:.15g} estimate={estimate}"


def check_pilots_orthonormal(rng) -> CheckOutcome:
    worst = 0.0
    for tau, k in ((1, 1), (3, 3), (6, 3), (9, 4)):
        s = generate_pilots(tau, k, rng)
        worst = max(worst, float(np.linalg.norm(s.conj().T @ s - np.eye(k))))
    return worst <= 1e-10, f"max ||S*S - I|| = {worst:.2e}"


def _random_instance(rng, n_bs=4, n_rf=2, k=2, tau=3, n_q=3, p_n=0.3):
    correlation = random_low_rank_model(n_bs, n_q, rng)
    w = complex_gaussian(rng, (n_rf, n_bs))
    pilots = generate_pilots(tau, k, rng)
    return ObservationModel(w, pilots, correlation, p_n)


def check_estimator_forms_agree(rng) -> CheckOutcome:
    model = _random_instance(rng)
    h = sample_channel(model.correlation, model.k, rng)
    n = sample_noise(model.n_bs, model.tau, model.p_n, rng)
    y = observe(model, h, n)
    a = mmse_estimate(model, y, "kronecker")
    b = mmse_estimate(model, y, "structured")
    estimate_gap = float(np.linalg.norm(a - b) / np.linalg.norm(a))
    mse_gap = abs(analytic_mse(model, "kronecker") - analytic_mse(model, "structured"))
    return estimate_gap < 1e-8 and mse_gap < 1e-8, f"estimate gap {estimate_gap:.2e}, mse gap {mse_gap:.2e}"


def check_combiner_invariance(rng) -> CheckOutcome:
    model = _random_instance(rng)
    a = complex_gaussian(rng, (model.n_rf, model.n_rf))
    moved = ObservationModel(a @ model.w, model.pilots, model.correlation, model.p_n)
    gap = abs(analytic_mse(model) - analytic_mse(moved)) / analytic_mse(model)
    return gap < 1e-8, f"relative mse change {gap:.2e}"


def check_cgac_optimality(rng) -> CheckOutcome:
    model = _random_instance(rng, n_q=4)
    best = objective_f(optimal_cgac(model.correlation, model.p_n, model.n_rf), model)
    worst = max(objective_f(complex_gaussian(rng, (model.n_rf, model.n_bs)), model) for _ in range(500))
    return worst <= best + 1e-9, f"optimal {best:.6g}, best random {worst:.6g}"


def check_reduced_objective(rng) -> CheckOutcome:
    model = _random_instance(rng, tau=2)
    u_tilde, _ = np.linalg.qr(model.w.conj().T)
    a = objective_f(model.w, model)
    b = reduced_objective(u_tilde, model.correlation.q, model.correlation.alpha, model.p_n, model.k)
    return abs(a - b) <= 1e-10 * max(1.0, abs(a)), f"objective {a:.12g}, reduced {b:.12g}"


def check_alternating_design(rng) -> CheckOutcome:
    correlation = random_low_rank_model(8, 6, rng)
    full = design_psoac(correlation, 0.1, 4)
    magiq = design_psoac(correlation, 0.1, 4, {"magiq_mode": True})
    history = full.design_meta["residual_history"]
    monotone = all(b <= a * (1 + 1e-12) for a, b in zip(history, history[1:]))
    unit = float(np.max(np.abs(np.abs(full.w) - 1.0)))
    dominated = full.design_meta["residual"] <= magiq.design_meta["residual"]
    return (
        monotone and unit <= 1e-12 and dominated,
        f"{len(history)} iterations, residual {history[-1]:.4g} (magiq {magiq.design_meta['residual']:.4g})",
    )


def check_alternating_steps(rng) -> CheckOutcome:
    correlation = random_low_rank_model(6, 5, rng)
    u = top_eigenvectors(q_bar(correlation.q, 1.0, 0.2), 3)
    w = np.exp(2j * np.pi * rng.uniform(size=(3, 6)))
    d = np.diag(rng.uniform(0.5, 2.0, size=3)).astype(complex)
    v = procrustes_v(w, u, d)
    residual = np.linalg.norm(w - v @ d @ u.conj().T)
    candidates = unitary_group.rvs(3, size=200, random_state=rng)
    beaten = min(np.linalg.norm(w - x @ d @ u.conj().T) for x in candidates)
    d_new = update_d(w, v, u, 1e-6)
    improved = np.linalg.norm(w - v @ d_new @ u.conj().T) <= residual + 1e-12
    return residual <= beaten + 1e-12 and improved, f"procrustes residual {residual:.6g}"


def check_virtual_extension(rng) -> CheckOutcome:
    worst = 0.0
    counts = []
    for n_rf, n_bs in ((4, 8), (8, 16), (3, 6)):
        w = complex_gaussian(rng, (n_rf, n_bs))
        x = complex_gaussian(rng, (n_bs, 5))
        passes = []
        y = apply_sequential(partition(w), x, on_pass=lambda r, c: passes.append((r, c)))
        worst = max(worst, float(np.max(np.abs(y - w @ x))))
        counts.append(len(passes))
    return worst <= 1e-12 and counts[:2] == [4, 16], f"max error {worst:.2e}, passes {counts}"


def check_phase_quantization(rng) -> CheckOutcome:
    step = 360.0 / 256
    w = np.exp(2j * np.pi * rng.uniform(size=10000))
    q = quantize_phases(w, step)
    error = np.degrees(np.abs(np.angle(q / w)))
    again = quantize_phases(q, step)
    worst = float(np.max(error))
    idempotent = np.allclose(again, q, rtol=0, atol=1e-12)
    return worst <= step / 2 + 1e-9 and idempotent, f"max phase error {worst:.5f} deg"


CHECKS: List[Tuple[str, Callable]] = [
    ("jakes kernel", check_jakes_kernel),
    ("scalar wiener", check_scalar_wiener),
    ("orthonormal pilots", check_pilots_orthonormal),
    ("estimator forms agree", check_estimator_forms_agree),
    ("combiner invariance", check_combiner_invariance),
    ("cgac optimality", check_cgac_optimality),
    ("reduced objective", check_reduced_objective),
    ("alternating design", check_alternating_design),
    ("procrustes and diagonal steps", check_alternating_steps),
    ("virtual extension", check_virtual_extension),
    ("phase quantization", check_phase_quantization),
]


def run_invariant_suite(seed: int = 0) -> List[CheckResult]:
    results = []
    for index, (name, check) in enumerate(CHECKS):
        rng = make_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
        try:
            passed, detail = check(rng)
        except Exception as e:
            passed, detail = False, f"{e.__class__.__name__}: {e}"
        results.append(CheckResult(name, bool(passed), detail))
    return results


if __name__ == "__main__":
    for result in run_invariant_suite():
        print("ok  " if result.passed else "FAIL", result.name, result.detail)
