import os.path as osp

import numpy as np
import pytest

from rfcombiner.harness import CurvePoint, SweepSpec, summarize
from rfcombiner.lib.results import (
    RESULTS_COLUMNS,
    plot_curves,
    read_manifest,
    read_matrix,
    read_results_csv,
    summary_text,
    write_analytic_csv,
    write_manifest,
    write_matrix,
    write_results_csv,
    write_summary,
)


@pytest.fixture
def spec():
    return SweepSpec(n_bs=4, n_rf_values=[2], k=1, tau=1, snr_grid_db=[0.0, 10.0], master_seed=9)


@pytest.fixture
def points():
    return [
        CurvePoint("cgac", 0.0, 2, 0.5, 0.05, 0.49, 20, 0.48),
        CurvePoint("cgac", 10.0, 2, 0.1 / 3, 0.01, 0.03, 20, 0.031),
        CurvePoint("fully_digital", 0.0, 2, 0.4, 0.04, 0.41, 20, 0.39),
        CurvePoint("fully_digital", 10.0, 2, 0.02, 0.002, 0.021, 20, 0.019),
    ]


def test_results_csv(tmp_path, spec, points):
    path = write_results_csv(points, spec, str(tmp_path / "results.csv"))
    with open(path) as f:
        header = f.readline().rstrip("\n")
    assert header == ",".join(RESULTS_COLUMNS)
    assert header.startswith("method,n_bs,n_rf,k,tau,rank_mode,snr_db,nmse_mean")
    frame = read_results_csv(path)
    assert len(frame) == 4
    assert list(frame["rank_mode"]) == ["regular"] * 4
    assert list(frame["seed"]) == [9] * 4
    # full precision survives the round trip
    assert frame["nmse_mean"][1] == pytest.approx(0.1 / 3, rel=1e-15)


def test_analytic_csv(tmp_path, spec, points):
    path = write_analytic_csv(points, spec, str(tmp_path / "analytic.csv"))
    frame = read_results_csv(path)
    assert list(frame["analytic_nmse"]) == [0.48, 0.031, 0.39, 0.019]


def test_manifest(tmp_path, spec):
    path = write_manifest(str(tmp_path / "manifest.txt"), spec.as_dict(), "1.0", ["snr-sweep", "--seed", "9"],
                          {"failed_trials": 0})
    fields = read_manifest(path)
    assert fields["version"] == "1.0"
    assert fields["command"] == "snr-sweep --seed 9"
    assert fields["seed"] == "9"
    assert fields["rank_mode"] == "regular"
    assert fields["failed_trials"] == "0"


def test_summary(tmp_path, points):
    text = summary_text(summarize(points))
    assert text.splitlines()[0].split() == [
        "method", "n_rf", "snr_db", "nmse_mean", "nmse_ci95", "ratio_of_means", "n_trials",
    ]
    assert "cgac-fully_digital" in text
    path = write_summary(summarize(points), str(tmp_path / "summary.txt"))
    with open(path) as f:
        assert f.read() == text + "\n"


def test_matrix_file(tmp_path, rng):
    w = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    path = write_matrix(str(tmp_path / "w.txt"), w, {"method": "psoac", "n_rf": 3})
    with open(path) as f:
        assert f.readline() == "# method: psoac\n"
    assert np.array_equal(read_matrix(path), w)


def test_plots(tmp_path, spec, points):
    paths = plot_curves(points, spec, str(tmp_path))
    assert [osp.basename(p) for p in paths] == ["nmse_vs_snr_nbs4_nrf2.png"]
    assert all(osp.getsize(p) > 0 for p in paths)

    rf_spec = SweepSpec(n_bs=4, n_rf_values=[2, 3, 4], k=1, tau=1, snr_grid_db=[15.0], sweep="rf")
    rf_points = [CurvePoint("cgac", 15.0, n, 0.1, 0.01, 0.1, 20) for n in (2, 3, 4)]
    paths = plot_curves(rf_points, rf_spec, str(tmp_path))
    assert [osp.basename(p) for p in paths] == ["nmse_vs_nrf_nbs4.png"]
