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
"""Options shared by the sweep commands, and their conversion into a
``SweepSpec``."""

import argparse
import os.path as osp
from typing import List

import numpy as np

from rfcombiner.combiner_design import DesignMethods
from rfcombiner.hardware_emulation import DEFAULT_PHASE_LEVELS, Perturbation, QuantizationSpec
from rfcombiner.harness import RankMode, RankModeNames, SweepSpec, execute_sweep, summarize
from rfcombiner.lib import results
from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.version import __version__


def parse_snr_grid(text: str) -> List[float]:
    """``A:STEP:B`` (inclusive) or a comma-separated list of dB values."""
    text = str(text).strip()
    if not text:
        raise InvalidArgumentError("SNR grid is empty")
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise InvalidArgumentError(f"SNR range must be A:STEP:B; got {text!r}")
            start, step, stop = parts
            if step <= 0:
                raise InvalidArgumentError(f"SNR step must be positive; got {step:g}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            grid = [start + i * step for i in range(max(count, 0))]
        else:
            grid = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidArgumentError(f"cannot read SNR grid {text!r}")
    if not grid:
        raise InvalidArgumentError(f"SNR grid {text!r} is empty")
    return grid


def parse_int_list(text: str) -> List[int]:
    """``2,4,6`` or an inclusive range ``2:8``."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop = (int(p) for p in text.split(":"))
            values = list(range(start, stop + 1))
        else:
            values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidArgumentError(f"cannot read integer list {text!r}")
    if not values:
        raise InvalidArgumentError(f"integer list {text!r} is empty")
    return values


def parse_methods(text: str) -> List[str]:
    methods = [m.strip().replace("-", "_") for m in str(text).split(",") if m.strip()]
    for method in methods:
        if method not in DesignMethods:
            raise InvalidArgumentError(
                f"unknown method {method!r}; expected some of {', '.join(DesignMethods)}"
            )
    return methods


def parse_design_snr(text: str):
    """``per-point`` or a dB value."""
    if str(text).strip().lower() in ("per-point", "per_point", "perpoint"):
        return None
    try:
        return float(text)
    except ValueError:
        raise InvalidArgumentError(f"design SNR must be 'per-point' or a dB value; got {text!r}")


def add_sweep_arguments(parser: argparse.ArgumentParser, sweep: str):
    parser.add_argument("--n-bs", type=int, default=8, help="antennas (default 8)")
    if sweep == "snr":
        parser.add_argument("--n-rf", type=int, default=None, help="RF chains (default n_bs/2)")
        parser.add_argument("--snr", type=parse_snr_grid, default=parse_snr_grid("0:5:30"),
                            help="SNR grid in dB, A:STEP:B or a list (default 0:5:30)")
    else:
        parser.add_argument("--n-rf-list", type=parse_int_list, default=None,
                            help="RF-chain counts, a list or A:B (default 2..n_bs)")
        parser.add_argument("--snr-db", type=float, default=15.0, help="fixed SNR in dB (default 15)")
    parser.add_argument("--k", type=int, default=3, help="users (default 3)")
    parser.add_argument("--tau", type=int, default=None, help="pilot length (default k)")
    parser.add_argument("--rank", choices=RankModeNames, default="regular",
                        help="correlation rank setting (default regular)")
    parser.add_argument("--n-q", type=int, default=None,
                        help="rank of Q in the regular setting (default n_bs; ceil(5 n_bs / 8) for rf-sweep)")
    parser.add_argument("--spacing", type=float, default=0.2,
                        help="antenna spacing in wavelengths for --rank jakes (default 0.2)")
    parser.add_argument("--methods", type=parse_methods, default=["fully_digital", "cgac", "psoac", "selection"],
                        help="comma-separated subset of " + ",".join(DesignMethods))
    parser.add_argument("--q-realizations", type=int, default=1000, help="correlation realizations (default 1000)")
    parser.add_argument("--trials-per-q", type=int, default=20, help="trials per realization (default 20)")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--alpha", type=float, default=1.0, help="transmit correlation scale (default 1)")
    parser.add_argument("--design-snr", type=parse_design_snr, default=None,
                        help="'per-point' (default) or the dB value every combiner is designed for")
    parser.add_argument("--eta", type=float, default=None, help="lower bound on D (default 1e-6)")
    parser.add_argument("--max-iters", type=int, default=None, help="alternating design iterations (default 500)")
    parser.add_argument("--tol", type=float, default=None, help="relative residual decrease to stop at (default 1e-8)")
    parser.add_argument("--quantize", action="store_true", help="snap weights to the board's resolution")
    parser.add_argument("--phase-step", type=float, default=360.0 / DEFAULT_PHASE_LEVELS,
                        help="phase grid step in degrees (default 1.40625)")
    parser.add_argument("--dac-bits", type=int, default=10, help="DAC resolution for complex gains (default 10)")
    parser.add_argument("--gain-err-db", type=float, default=0.0, help="uniform gain error bound in dB")
    parser.add_argument("--phase-err-deg", type=float, default=0.0, help="uniform phase error bound in degrees")
    parser.add_argument("--hardware", action="store_true",
                        help="quantize and combine by sequential 2x4 block passes")
    parser.add_argument("--analytic", action="store_true", help="also write analytic.csv")
    parser.add_argument("--cross-check", action="store_true",
                        help="compare empirical and analytic MSE per design")
    parser.add_argument("--estimator", choices=("structured", "kronecker"), default="structured",
                        help="estimator evaluation (default structured)")
    parser.add_argument("--no-plots", action="store_true", help="do not write PNG plots")
    parser.add_argument("--no-progress", action="store_true", help="no progress bar")
    return parser


def spec_from_args(args: argparse.Namespace, sweep: str, settings) -> SweepSpec:
    if args.rank not in RankModeNames:
        raise InvalidArgumentError(f"rank must be one of {', '.join(RankModeNames)}; got {args.rank!r}")
    quantization = None
    perturbation = None
    if args.gain_err_db or args.phase_err_deg:
        perturbation = Perturbation(args.gain_err_db, args.phase_err_deg)
    if args.quantize or args.hardware or perturbation is not None:
        quantization = QuantizationSpec(
            dac_bits=args.dac_bits,
            phase_step_deg=args.phase_step,
            perturbation=perturbation,
            board=settings["mode"] == "paper-compat",
        )
    if sweep == "snr":
        n_rf_values = [args.n_bs // 2 if args.n_rf is None else args.n_rf]
        snr_grid = args.snr
    else:
        n_rf_values = args.n_rf_list or list(range(2, args.n_bs + 1))
        snr_grid = [args.snr_db]
    design_options = {"eta": args.eta, "max_iters": args.max_iters, "tol": args.tol}
    return SweepSpec(
        n_bs=args.n_bs,
        n_rf_values=n_rf_values,
        k=args.k,
        tau=args.k if args.tau is None else args.tau,
        snr_grid_db=snr_grid,
        rank_mode=RankMode[args.rank],
        n_q=args.n_q,
        spacing=args.spacing,
        methods=args.methods,
        q_realizations=args.q_realizations,
        trials_per_q=args.trials_per_q,
        master_seed=args.seed,
        alpha=args.alpha,
        quantization=quantization,
        design_snr_db=args.design_snr,
        design_options={key: value for key, value in design_options.items() if value is not None},
        hardware=args.hardware,
        analytic=args.analytic,
        cross_check=args.cross_check,
        estimator=args.estimator,
        sweep=sweep,
        mode=settings["mode"],
        progress=settings["progress"] and not args.no_progress,
    )


def run_and_report(cmd, spec: SweepSpec, argv: List[str], plots: bool) -> int:
    """Run ``spec`` and write its result files into the output
    directory; ``cmd`` is the command doing the reporting."""
    outdir = results.ensure_outdir(cmd.settings["outdir"])
    outcome = execute_sweep(spec)
    summary = summarize(outcome.points)

    paths = [results.write_results_csv(outcome.points, spec, osp.join(outdir, "results.csv"))]
    paths.append(
        results.write_manifest(
            osp.join(outdir, "manifest.txt"),
            spec.as_dict(),
            __version__,
            argv,
            {"failed_trials": outcome.failed, "total_trials": outcome.total,
             "cross_check_flags": outcome.cross_check_flags},
        )
    )
    paths.append(results.write_summary(summary, osp.join(outdir, "summary.txt")))
    if spec.analytic:
        paths.append(results.write_analytic_csv(outcome.points, spec, osp.join(outdir, "analytic.csv")))
    if plots:
        paths += results.plot_curves(outcome.points, spec, outdir)

    cmd.section(f"{spec.sweep}-sweep: {len(outcome.points)} points")
    cmd.msg(results.summary_text(summary))
    if outcome.failed:
        cmd.errmsg(f"{outcome.failed} of {outcome.total} trials were excluded")
    if outcome.cross_check_flags:
        cmd.errmsg(f"{outcome.cross_check_flags} designs disagree with their analytic MSE")
    cmd.msg("wrote " + ", ".join(osp.basename(p) for p in paths) + f" in {outdir}")
    return 0
