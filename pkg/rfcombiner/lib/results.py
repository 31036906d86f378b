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
"""Files written by the commands: result tables, run manifests,
combiner matrices and plots."""

import os
import os.path as osp
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.format import format_matrix_rows, format_table, parse_matrix_rows

RESULTS_COLUMNS = [
    "method",
    "n_bs",
    "n_rf",
    "k",
    "tau",
    "rank_mode",
    "snr_db",
    "nmse_mean",
    "nmse_ci95",
    "nmse_ratio_of_means",
    "n_trials",
    "seed",
]

ANALYTIC_COLUMNS = ["method", "n_bs", "n_rf", "k", "rank_mode", "snr_db", "analytic_nmse", "seed"]

# Enough digits to make a CSV file a faithful record of the doubles.
FLOAT_FORMAT = "%.17g"


def ensure_outdir(outdir: str) -> str:
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as e:
        raise InvalidArgumentError(f"cannot create output directory {outdir!r}: {e}")
    return outdir


def results_frame(points, spec) -> pd.DataFrame:
    rows = [
        {
            "method": p.method,
            "n_bs": spec.n_bs,
            "n_rf": p.n_rf,
            "k": spec.k,
            "tau": spec.tau,
            "rank_mode": spec.rank_label(),
            "snr_db": p.snr_db,
            "nmse_mean": p.nmse_mean,
            "nmse_ci95": p.nmse_ci95,
            "nmse_ratio_of_means": p.nmse_ratio_of_means,
            "n_trials": p.n_trials,
            "seed": spec.master_seed,
        }
        for p in points
    ]
    return pd.DataFrame(rows, columns=RESULTS_COLUMNS)


def write_results_csv(points, spec, path: str) -> str:
    results_frame(points, spec).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_results_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path)


def write_analytic_csv(points, spec, path: str) -> str:
    rows = [
        {
            "method": p.method,
            "n_bs": spec.n_bs,
            "n_rf": p.n_rf,
            "k": spec.k,
            "rank_mode": spec.rank_label(),
            "snr_db": p.snr_db,
            "analytic_nmse": p.analytic_nmse,
            "seed": spec.master_seed,
        }
        for p in points
    ]
    frame = pd.DataFrame(rows, columns=ANALYTIC_COLUMNS)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_manifest(path: str, fields: Dict[str, Any], version: str, argv: Optional[Sequence[str]] = None,
                   extra: Optional[Dict[str, Any]] = None) -> str:
    """``key: value`` lines echoing a run's parameters."""
    lines = [f"version: {version}"]
    if argv is not None:
        lines.append("command: " + " ".join(argv))
    for key, value in fields.items():
        lines.append(f"{key}: {value}")
    for key, value in (extra or {}).items():
        lines.append(f"{key}: {value}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path


def read_manifest(path: str) -> Dict[str, str]:
    fields = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            key, _, value = line.rstrip("\n").partition(": ")
            fields[key] = value
    return fields


def summary_text(summary) -> str:
    point_rows = [
        (p.method, p.n_rf, p.snr_db, p.nmse_mean, p.nmse_ci95, p.nmse_ratio_of_means, p.n_trials)
        for p in summary.rows
    ]
    text = format_table(
        ("method", "n_rf", "snr_db", "nmse_mean", "nmse_ci95", "ratio_of_means", "n_trials"), point_rows
    )
    if summary.gaps:
        text += "\n\n" + format_table(("gap", "method", "n_rf", "snr_db", "absolute", "relative"), summary.gaps)
    return text


def write_summary(summary, path: str) -> str:
    with open(path, "w", encoding="utf-8") as f:
        f.write(summary_text(summary) + "\n")
    return path


def write_matrix(path: str, w: np.ndarray, meta: Optional[Dict[str, Any]] = None) -> str:
    """``#``-prefixed metadata lines, then one line per row of
    whitespace-separated ``re,im`` pairs."""
    lines = [f"# {key}: {value}" for key, value in (meta or {}).items()]
    lines += format_matrix_rows(w)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path


def read_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as f:
        return parse_matrix_rows(f.readlines())


def plot_curves(points, spec, outdir: str) -> List[str]:
    """One PNG per display curve: NMSE versus SNR for every n_rf of an
    SNR sweep, NMSE versus n_rf for an RF-chain sweep. Log-scale y."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []
    methods = list(dict.fromkeys(p.method for p in points))
    if spec.sweep == "rf":
        groups = [("snr", spec.snr_grid_db[0])]
    else:
        groups = [("n_rf", n_rf) for n_rf in spec.n_rf_values]

    for label, value in groups:
        fig, ax = plt.subplots()
        for method in methods:
            if spec.sweep == "rf":
                curve = [p for p in points if p.method == method]
                x = [p.n_rf for p in curve]
            else:
                curve = [p for p in points if p.method == method and p.n_rf == value]
                x = [p.snr_db for p in curve]
            y = np.array([p.nmse_mean for p in curve])
            err = np.array([p.nmse_ci95 for p in curve])
            ax.errorbar(x, y, yerr=err, marker="o", capsize=3, label=method)
        ax.set_yscale("log")
        if spec.sweep == "rf":
            ax.set_xlabel("RF chains")
            ax.set_title(f"NMSE vs RF chains, N_bs={spec.n_bs}, SNR={value:g} dB")
            name = f"nmse_vs_nrf_nbs{spec.n_bs}.png"
        else:
            ax.set_xlabel("SNR (dB)")
            ax.set_title(f"NMSE vs SNR, N_bs={spec.n_bs}, N_rf={value}, {spec.rank_label()} rank")
            name = f"nmse_vs_snr_nbs{spec.n_bs}_nrf{value}.png"
        ax.set_ylabel("NMSE")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = osp.join(outdir, name)
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
