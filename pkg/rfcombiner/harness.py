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
"""Monte-Carlo sweeps of normalized MSE over SNR and RF-chain count.

For every correlation realization, SNR point, RF-chain count and
method a combiner is designed once; then ``trials_per_q`` trials with
fresh channel, pilots and noise are scored. All methods see the same
trials.

Random streams are addressed by position in the grid (see
``lib.rng.substream``) with a leading stream tag:

    (STREAM_Q, q_index[, n_rf])                   correlation matrix
    (STREAM_TRIAL, q_index, trial_index, snr_index) channel, pilots, noise
    (STREAM_DESIGN, q_index, snr_index, n_rf)     random selection
    (STREAM_PERTURB, q_index, snr_index, n_rf, method_index)

so results do not depend on the order the grid is walked in.
"""

from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from tqdm import tqdm

from rfcombiner.channel_model import (
    CorrelationModel,
    draw_realization,
    jakes_model,
    random_low_rank_model,
    snr_db_to_noise_variance,
)
from rfcombiner.combiner_design import DesignMethods, design_combiner
from rfcombiner.estimator import (
    EstimatorMethods,
    ObservationModel,
    analytic_mse,
    mmse_estimate,
    normalized_mse,
    observe,
)
from rfcombiner.hardware_emulation import QuantizationSpec, perturb, quantize
from rfcombiner.lib.exception import (
    DegenerateTrialError,
    InvalidArgumentError,
    SingularModelError,
    TrialFailureThresholdError,
)
from rfcombiner.lib.rng import substream
from rfcombiner.tracing import TraceEvent, trace_event
from rfcombiner.virtual_extension import apply_sequential, partition

RankModeNames = ("regular", "best", "jakes")
RankMode = Enum("RankMode", RankModeNames)

STREAM_Q = 0
STREAM_TRIAL = 1
STREAM_DESIGN = 2
STREAM_PERTURB = 3

# A sweep fails if a larger fraction of its trials raise errors.
FAILURE_THRESHOLD = 1e-3

# Half-width multiplier of a two-sided 95% normal confidence interval.
Z95 = float(stats.norm.ppf(0.975))

# Cross-check tolerance, in confidence-interval half-widths.
CROSS_CHECK_WIDTHS = 4.0

PAPER_COMPAT_N_BS = (4, 8, 16)
PAPER_COMPAT_MAX_K = 10

# Default rank of Q in a regular-setting RF-chain sweep, as a fraction of
# n_bs, rounded up. With that many RF chains or more the MSE-optimal
# combiner spans the range of Q.
RF_SWEEP_RANK_FRACTION = (5, 8)


class SweepSpec:
    """Everything that determines a sweep's output.

    ``sweep`` is ``"snr"`` (NMSE versus SNR) or ``"rf"`` (NMSE versus
    the number of RF chains at one SNR). ``design_snr_db`` of None
    designs every combiner for the SNR it is evaluated at.
    """

    def __init__(
        self,
        n_bs: int,
        n_rf_values: Sequence[int],
        k: int,
        tau: int,
        snr_grid_db: Sequence[float],
        rank_mode: RankMode = RankMode.regular,
        n_q: Optional[int] = None,
        spacing: float = 0.2,
        methods: Sequence[str] = ("fully_digital", "cgac", "psoac", "selection"),
        q_realizations: int = 1000,
        trials_per_q: int = 20,
        master_seed: int = 0,
        alpha: float = 1.0,
        quantization: Optional[QuantizationSpec] = None,
        design_snr_db: Optional[float] = None,
        design_options: Optional[Dict[str, Any]] = None,
        hardware: bool = False,
        analytic: bool = False,
        cross_check: bool = False,
        estimator: str = "structured",
        sweep: str = "snr",
        mode: str = "paper-compat",
        progress: bool = False,
    ):
        self.n_bs = int(n_bs)
        self.n_rf_values = [int(n) for n in n_rf_values]
        self.k = int(k)
        self.tau = int(tau)
        self.snr_grid_db = [float(s) for s in snr_grid_db]
        self.rank_mode = rank_mode
        self.n_q = n_q
        self.spacing = float(spacing)
        self.methods = list(methods)
        self.q_realizations = int(q_realizations)
        self.trials_per_q = int(trials_per_q)
        self.master_seed = int(master_seed)
        self.alpha = float(alpha)
        self.quantization = quantization
        self.design_snr_db = design_snr_db
        self.design_options = dict(design_options or {})
        self.hardware = hardware
        self.analytic = analytic
        self.cross_check = cross_check
        self.estimator = estimator
        self.sweep = sweep
        self.mode = mode
        self.progress = progress
        self.validate()

    def validate(self):
        if self.sweep not in ("snr", "rf"):
            raise InvalidArgumentError(f"sweep must be 'snr' or 'rf'; got {self.sweep!r}")
        if self.mode not in ("paper-compat", "free"):
            raise InvalidArgumentError(f"mode must be 'paper-compat' or 'free'; got {self.mode!r}")
        if not self.snr_grid_db:
            raise InvalidArgumentError("SNR grid is empty")
        if self.sweep == "rf" and len(self.snr_grid_db) != 1:
            raise InvalidArgumentError("an RF-chain sweep runs at exactly one SNR")
        if not self.n_rf_values:
            raise InvalidArgumentError("no RF-chain counts given")
        if not self.methods:
            raise InvalidArgumentError("no methods given")
        for method in self.methods:
            if method not in DesignMethods:
                raise InvalidArgumentError(
                    f"unknown method {method!r}; expected some of {', '.join(DesignMethods)}"
                )
        if len(set(self.methods)) != len(self.methods):
            raise InvalidArgumentError("methods are listed twice")
        if self.estimator not in EstimatorMethods:
            raise InvalidArgumentError(f"unknown estimator {self.estimator!r}")
        if self.n_bs < 1 or self.k < 1:
            raise InvalidArgumentError("n_bs and k must be at least 1")
        if self.tau < self.k:
            raise InvalidArgumentError(f"tau must be at least k; got tau={self.tau}, k={self.k}")
        for n_rf in self.n_rf_values:
            if not 1 <= n_rf <= self.n_bs:
                raise InvalidArgumentError(f"n_rf must lie in [1, {self.n_bs}]; got {n_rf}")
        if self.q_realizations < 1 or self.trials_per_q < 1:
            raise InvalidArgumentError("q_realizations and trials_per_q must be at least 1")
        if not self.alpha > 0:
            raise InvalidArgumentError(f"alpha must be positive; got {self.alpha}")
        if self.master_seed < 0:
            raise InvalidArgumentError(f"seed must be nonnegative; got {self.master_seed}")

        if self.rank_mode == RankMode.best:
            if self.n_q is not None and any(self.n_q != n for n in self.n_rf_values):
                raise InvalidArgumentError("best rank setting needs n_q equal to n_rf")
        elif self.rank_mode == RankMode.regular:
            n_q = self.regular_n_q
            if not 1 <= n_q <= self.n_bs:
                raise InvalidArgumentError(f"n_q must lie in [1, {self.n_bs}]; got {n_q}")
            # an RF-chain sweep holds Q fixed while n_rf passes its rank
            for n_rf in self.n_rf_values if self.sweep == "snr" else ():
                if not (n_rf < n_q or n_rf == n_q == self.n_bs):
                    raise InvalidArgumentError(
                        f"regular rank setting needs n_rf < n_q <= n_bs; got n_rf={n_rf}, n_q={n_q}"
                    )
        elif not self.spacing > 0:
            raise InvalidArgumentError(f"antenna spacing must be positive; got {self.spacing}")

        if self.mode == "paper-compat":
            self._validate_paper_compat()

    def _validate_paper_compat(self):
        if self.n_bs not in PAPER_COMPAT_N_BS:
            raise InvalidArgumentError(
                f"n_bs must be one of {PAPER_COMPAT_N_BS} in paper-compat mode; got {self.n_bs}"
            )
        if not 1 <= self.k <= PAPER_COMPAT_MAX_K:
            raise InvalidArgumentError(f"k must lie in [1, {PAPER_COMPAT_MAX_K}] in paper-compat mode")
        if self.tau not in (self.k, 2 * self.k, 3 * self.k):
            raise InvalidArgumentError("tau must be k, 2k or 3k in paper-compat mode")
        if self.sweep == "snr" and self.n_rf_values != [self.n_bs // 2]:
            raise InvalidArgumentError(f"n_rf must be n_bs/2 = {self.n_bs // 2} in paper-compat mode")
        if self.sweep == "rf" and min(self.n_rf_values) < 2:
            raise InvalidArgumentError("n_rf must lie in [2, n_bs] in paper-compat mode")

    @property
    def regular_n_q(self) -> int:
        if self.n_q is not None:
            return int(self.n_q)
        if self.sweep == "rf":
            numerator, denominator = RF_SWEEP_RANK_FRACTION
            return -(-numerator * self.n_bs // denominator)
        return self.n_bs

    def rank_label(self) -> str:
        return self.rank_mode.name

    def effective_quantization(self) -> Optional[QuantizationSpec]:
        if self.quantization is None and self.hardware:
            return QuantizationSpec()
        return self.quantization

    def as_dict(self) -> Dict[str, Any]:
        """Every field, for the run manifest."""
        quantization = self.effective_quantization()
        return {
            "sweep": self.sweep,
            "mode": self.mode,
            "n_bs": self.n_bs,
            "n_rf": self.n_rf_values,
            "k": self.k,
            "tau": self.tau,
            "rank_mode": self.rank_label(),
            "n_q": self.regular_n_q if self.rank_mode == RankMode.regular else (
                "n_rf" if self.rank_mode == RankMode.best else None),
            "spacing": self.spacing if self.rank_mode == RankMode.jakes else None,
            "snr_db": self.snr_grid_db,
            "methods": self.methods,
            "q_realizations": self.q_realizations,
            "trials_per_q": self.trials_per_q,
            "seed": self.master_seed,
            "alpha": self.alpha,
            "design_snr": "per-point" if self.design_snr_db is None else self.design_snr_db,
            "design_options": self.design_options,
            "quantization": None if quantization is None else quantization.describe(),
            "hardware": self.hardware,
            "analytic": self.analytic,
            "cross_check": self.cross_check,
            "estimator": self.estimator,
        }

    pass


class CurvePoint(NamedTuple):
    method: str
    snr_db: float
    n_rf: int
    nmse_mean: float
    nmse_ci95: float
    nmse_ratio_of_means: float
    n_trials: int
    # mean over correlation realizations of analytic MSE / E‖h‖²
    analytic_nmse: Optional[float] = None


class SweepOutcome(NamedTuple):
    points: List[CurvePoint]
    failed: int
    total: int
    cross_check_flags: int


class Summary(NamedTuple):
    rows: List[CurvePoint]
    # (label, method, n_rf, snr_db, absolute gap, relative gap)
    gaps: List[Tuple[str, str, int, float, float, float]]


class _Accumulator:
    """Per-trial values of one curve point, in grid order."""

    def __init__(self):
        self.nmse: List[float] = []
        self.error_energy: List[float] = []
        self.channel_energy: List[float] = []
        self.analytic: List[float] = []

    def point(self, method: str, snr_db: float, n_rf: int, analytic: bool) -> CurvePoint:
        n = len(self.nmse)
        if n == 0:
            nan = float("nan")
            return CurvePoint(method, snr_db, n_rf, nan, nan, nan, 0, nan if analytic else None)
        values = np.array(self.nmse)
        ci95 = float(Z95 * stats.sem(values)) if n > 1 else 0.0
        ratio = float(np.sum(self.error_energy) / np.sum(self.channel_energy))
        analytic_nmse = float(np.mean(self.analytic)) if analytic and self.analytic else None
        return CurvePoint(method, snr_db, n_rf, float(np.mean(values)), ci95, ratio, n, analytic_nmse)

    pass


def confidence_half_width(values: Sequence[float]) -> float:
    """1.96·std/√n with the n − 1 normalization; 0 for one value."""
    if len(values) < 2:
        return 0.0
    return float(Z95 * stats.sem(np.asarray(values, dtype=float)))


def build_correlation(spec: SweepSpec, q_index: int, n_rf: int) -> CorrelationModel:
    if spec.rank_mode == RankMode.jakes:
        return jakes_model(spec.n_bs, spec.spacing, spec.alpha)
    if spec.rank_mode == RankMode.best:
        rng = substream(spec.master_seed, STREAM_Q, q_index, n_rf)
        return random_low_rank_model(spec.n_bs, n_rf, rng, spec.alpha)
    rng = substream(spec.master_seed, STREAM_Q, q_index)
    return random_low_rank_model(spec.n_bs, spec.regular_n_q, rng, spec.alpha)


def _score_trial(model: ObservationModel, plan, realization, estimator: str) -> Tuple[float, float, float]:
    h_mat, noise, pilots = realization
    trial = model.with_pilots(pilots)
    if plan is None:
        y = observe(trial, h_mat, noise)
    else:
        y = apply_sequential(plan, h_mat @ pilots.T + noise).reshape(-1, order="F")
    h_hat = mmse_estimate(trial, y, estimator)
    h = h_mat.reshape(-1, order="F")
    nmse = normalized_mse(h, h_hat)
    energy = float(np.vdot(h, h).real)
    return nmse, nmse * energy, energy


def execute_sweep(spec: SweepSpec) -> SweepOutcome:
    """Run ``spec`` and return its curve points plus failure counts."""
    quantization = spec.effective_quantization()
    accumulators: Dict[Tuple[str, int, int], _Accumulator] = {}
    for method in spec.methods:
        for n_rf in spec.n_rf_values:
            for snr_index in range(len(spec.snr_grid_db)):
                accumulators[(method, n_rf, snr_index)] = _Accumulator()
    failed = 0
    total = 0
    flags = 0
    # Designs for a fixed correlation only need to be computed once.
    design_cache: Dict[Tuple[int, int, str], Any] = {}
    fixed_q = spec.rank_mode == RankMode.jakes

    progress = tqdm(
        total=spec.q_realizations * len(spec.snr_grid_db),
        disable=not spec.progress,
        desc=f"{spec.sweep}-sweep",
        unit="point",
    )
    correlations: Dict[int, CorrelationModel] = {}
    for q_index in range(spec.q_realizations):
        correlations.clear()
        for snr_index, snr_db in enumerate(spec.snr_grid_db):
            p_n = snr_db_to_noise_variance(snr_db)
            design_p_n = p_n if spec.design_snr_db is None else snr_db_to_noise_variance(spec.design_snr_db)
            realizations = {}
            for n_rf in spec.n_rf_values:
                q_key = n_rf if spec.rank_mode == RankMode.best else 0
                if q_key not in correlations:
                    correlations[q_key] = build_correlation(spec, q_index, n_rf)
                correlation = correlations[q_key]
                if q_key not in realizations:
                    realizations[q_key] = [
                        draw_realization(
                            correlation, spec.k, spec.tau, p_n,
                            substream(spec.master_seed, STREAM_TRIAL, q_index, trial_index, snr_index),
                        )
                        for trial_index in range(spec.trials_per_q)
                    ]
                trials = realizations[q_key]
                for method_index, method in enumerate(spec.methods):
                    accumulator = accumulators[(method, n_rf, snr_index)]
                    total += len(trials)
                    try:
                        combiner = _design(spec, quantization, correlation, design_p_n, n_rf, method,
                                           method_index, q_index, snr_index,
                                           design_cache if fixed_q else None)
                        model = ObservationModel(combiner, trials[0].pilots, correlation, p_n)
                        mse = analytic_mse(model, "structured") if (spec.analytic or spec.cross_check) else None
                    except SingularModelError as e:
                        failed += len(trials)
                        trace_event(TraceEvent.trial_error, method=method, q_index=q_index,
                                    snr_db=snr_db, n_rf=n_rf, trials=len(trials), error=str(e))
                        continue
                    plan = partition(combiner) if spec.hardware else None
                    errors = []
                    for trial_index, realization in enumerate(trials):
                        try:
                            nmse, error_energy, energy = _score_trial(model, plan, realization, spec.estimator)
                        except (SingularModelError, DegenerateTrialError, np.linalg.LinAlgError) as e:
                            failed += 1
                            trace_event(TraceEvent.trial_error, method=method, q_index=q_index,
                                        trial=trial_index, snr_db=snr_db, n_rf=n_rf, error=str(e))
                            continue
                        accumulator.nmse.append(nmse)
                        accumulator.error_energy.append(error_energy)
                        accumulator.channel_energy.append(energy)
                        errors.append(error_energy)
                    if mse is not None:
                        accumulator.analytic.append(mse / correlation.channel_energy(spec.k))
                    if spec.cross_check and len(errors) > 1:
                        if not _cross_check(errors, mse, method, q_index, snr_db, n_rf):
                            flags += 1
            progress.update(1)
    progress.close()

    if total and failed > FAILURE_THRESHOLD * total:
        raise TrialFailureThresholdError(failed, total, FAILURE_THRESHOLD)

    points = []
    for method in spec.methods:
        for n_rf in spec.n_rf_values:
            for snr_index, snr_db in enumerate(spec.snr_grid_db):
                point = accumulators[(method, n_rf, snr_index)].point(method, snr_db, n_rf, spec.analytic)
                trace_event(TraceEvent.point, method=method, n_rf=n_rf, snr_db=snr_db,
                            nmse=point.nmse_mean, ci95=point.nmse_ci95, n=point.n_trials)
                points.append(point)
    return SweepOutcome(points, failed, total, flags)


def _design(spec, quantization, correlation, p_n, n_rf, method, method_index, q_index, snr_index, cache):
    key = (snr_index, n_rf, method)
    if cache is not None and key in cache and method != "selection":
        return cache[key]
    rng = substream(spec.master_seed, STREAM_DESIGN, q_index, snr_index, n_rf)
    combiner = design_combiner(method, correlation, p_n, n_rf, rng, spec.design_options)
    if quantization is not None:
        combiner = quantize(combiner, quantization)
        if quantization.perturbation is not None:
            rng = substream(spec.master_seed, STREAM_PERTURB, q_index, snr_index, n_rf, method_index)
            combiner = perturb(combiner, quantization, rng)
    if cache is not None and (quantization is None or quantization.perturbation is None):
        cache[key] = combiner
    return combiner


def _cross_check(errors: List[float], mse: float, method: str, q_index: int, snr_db: float, n_rf: int) -> bool:
    """Compare the empirical mean of ‖h − ĥ‖² with the analytic MSE."""
    empirical = float(np.mean(errors))
    width = confidence_half_width(errors)
    if abs(empirical - mse) <= CROSS_CHECK_WIDTHS * width:
        return True
    trace_event(TraceEvent.cross_check, method=method, q_index=q_index, snr_db=snr_db, n_rf=n_rf,
                empirical=empirical, analytic=mse, ci95=width)
    return False


def run_sweep(spec: SweepSpec) -> List[CurvePoint]:
    """NMSE curve points of ``spec``, ordered by method, n_rf, SNR."""
    return execute_sweep(spec).points


def run_rf_sweep(spec: SweepSpec) -> List[CurvePoint]:
    """NMSE versus the number of RF chains at the single SNR of
    ``spec``."""
    if spec.sweep != "rf" or len(spec.snr_grid_db) != 1:
        raise InvalidArgumentError("run_rf_sweep needs an 'rf' sweep with exactly one SNR")
    return execute_sweep(spec).points


def summarize(points: Sequence[CurvePoint]) -> Summary:
    """Rows ordered by (method, n_rf, SNR) and the gaps psoac − cgac and
    method − fully_digital at every common grid point."""
    if not points:
        raise InvalidArgumentError("nothing to summarize")
    rows = sorted(points, key=lambda p: (p.method, p.n_rf, p.snr_db))
    by_key = {(p.method, p.n_rf, p.snr_db): p for p in rows}
    gaps = []

    def add_gap(label, method, reference):
        for p in rows:
            if p.method != method:
                continue
            ref = by_key.get((reference, p.n_rf, p.snr_db))
            if ref is None:
                continue
            gap = p.nmse_mean - ref.nmse_mean
            relative = gap / ref.nmse_mean if ref.nmse_mean else 0.0
            gaps.append((label, method, p.n_rf, p.snr_db, gap, relative))

    add_gap("psoac-cgac", "psoac", "cgac")
    for method in sorted({p.method for p in rows}):
        if method != "fully_digital":
            add_gap(f"{method}-fully_digital", method, "fully_digital")
    return Summary(rows, gaps)
