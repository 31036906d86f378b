import numpy as np
import pytest

from rfcombiner import harness
from rfcombiner.hardware_emulation import QuantizationSpec
from rfcombiner.harness import (
    CurvePoint,
    RankMode,
    SweepSpec,
    Z95,
    confidence_half_width,
    execute_sweep,
    run_rf_sweep,
    run_sweep,
    summarize,
)
from rfcombiner.lib.exception import (
    DegenerateTrialError,
    InvalidArgumentError,
    TrialFailureThresholdError,
)
from rfcombiner.tracing import trace_activate

ALL_METHODS = ["fully_digital", "cgac", "psoac", "magiq", "selection"]


def small_spec(**kwargs):
    fields = dict(
        n_bs=4,
        n_rf_values=[2],
        k=1,
        tau=1,
        snr_grid_db=[0.0, 10.0],
        methods=ALL_METHODS,
        q_realizations=3,
        trials_per_q=4,
        master_seed=5,
        design_options={"max_iters": 50},
    )
    fields.update(kwargs)
    return SweepSpec(**fields)


def by_key(points):
    return {(p.method, p.n_rf, p.snr_db): p for p in points}


def test_points_cover_the_grid():
    points = run_sweep(small_spec())
    assert len(points) == len(ALL_METHODS) * 2
    assert [(p.method, p.snr_db) for p in points[:2]] == [("fully_digital", 0.0), ("fully_digital", 10.0)]
    for p in points:
        assert p.n_trials == 12
        assert p.nmse_mean >= 0.0
        assert p.nmse_ci95 >= 0.0
        assert p.nmse_ratio_of_means >= 0.0
        assert p.analytic_nmse is None


def test_same_seed_same_points():
    assert run_sweep(small_spec()) == run_sweep(small_spec())
    assert run_sweep(small_spec()) != run_sweep(small_spec(master_seed=6))


def test_single_trial_has_zero_ci():
    points = run_sweep(small_spec(methods=["cgac"], snr_grid_db=[10.0], q_realizations=1, trials_per_q=1))
    assert len(points) == 1
    assert points[0].n_trials == 1
    assert points[0].nmse_ci95 == 0.0


def test_analytic_ordering():
    points = by_key(run_sweep(small_spec(n_bs=8, n_rf_values=[4], k=2, tau=2, analytic=True, mode="free")))
    for snr in (0.0, 10.0):
        digital = points[("fully_digital", 4, snr)].analytic_nmse
        cgac = points[("cgac", 4, snr)].analytic_nmse
        psoac = points[("psoac", 4, snr)].analytic_nmse
        assert digital <= cgac + 1e-12
        assert cgac <= psoac + 1e-12
        assert 0.0 <= digital <= 1.0


def test_best_rank_cgac_reaches_fully_digital():
    spec = small_spec(n_bs=8, n_rf_values=[4], rank_mode=RankMode.best, methods=["fully_digital", "cgac"],
                      analytic=True, mode="free")
    points = by_key(run_sweep(spec))
    for snr in (0.0, 10.0):
        digital = points[("fully_digital", 4, snr)]
        cgac = points[("cgac", 4, snr)]
        assert cgac.analytic_nmse == pytest.approx(digital.analytic_nmse, rel=1e-8)


def test_full_array_matches_fully_digital():
    spec = small_spec(n_rf_values=[2, 3, 4], snr_grid_db=[15.0], sweep="rf",
                      methods=["fully_digital", "cgac", "psoac", "selection"])
    points = by_key(run_rf_sweep(spec))
    digital = points[("fully_digital", 4, 15.0)].nmse_mean
    for method in ("cgac", "psoac", "selection"):
        assert points[(method, 4, 15.0)].nmse_mean == pytest.approx(digital, rel=1e-8)


def test_rf_sweep_holds_q_rank_fixed():
    spec = small_spec(n_bs=8, n_rf_values=[2, 5, 6, 8], snr_grid_db=[15.0], sweep="rf",
                      methods=["fully_digital", "cgac"], analytic=True)
    # ceil(5/8 of n_bs), with n_rf allowed past it
    assert spec.regular_n_q == 5
    assert spec.as_dict()["n_q"] == 5
    points = by_key(run_rf_sweep(spec))
    for n_rf in (5, 6, 8):
        digital = points[("fully_digital", n_rf, 15.0)].analytic_nmse
        assert points[("cgac", n_rf, 15.0)].analytic_nmse == pytest.approx(digital, rel=1e-8)
    digital = points[("fully_digital", 2, 15.0)].analytic_nmse
    assert points[("cgac", 2, 15.0)].analytic_nmse > digital * 1.1
    explicit = small_spec(n_bs=8, n_rf_values=[2, 8], snr_grid_db=[15.0], sweep="rf", n_q=3)
    assert explicit.regular_n_q == 3
    assert small_spec(n_bs=16, n_rf_values=[8]).regular_n_q == 16


def test_rf_sweep_needs_one_snr():
    with pytest.raises(InvalidArgumentError):
        small_spec(sweep="rf", n_rf_values=[2, 3])
    with pytest.raises(InvalidArgumentError):
        run_rf_sweep(small_spec())


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(snr_grid_db=[]),
        dict(n_rf_values=[3], n_q=3, mode="free"),  # regular rank needs n_rf < n_q
        dict(n_q=2),
        dict(n_bs=5, n_rf_values=[2]),  # paper-compat sizes
        dict(k=2, tau=3),
        dict(k=11, tau=11),
        dict(n_rf_values=[1]),  # paper-compat snr sweep needs n_bs/2
        dict(methods=["cgac", "cgac"]),
        dict(methods=["dft"]),
        dict(tau=0),
        dict(estimator="ls"),
        dict(rank_mode=RankMode.best, n_q=3),
        dict(q_realizations=0),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidArgumentError):
        small_spec(**kwargs)


def test_free_mode_lifts_range_checks():
    spec = small_spec(n_bs=5, n_rf_values=[1, 3], k=2, tau=5, mode="free")
    assert spec.as_dict()["n_bs"] == 5


def test_jakes_rank_mode_reuses_designs():
    spec = small_spec(n_bs=8, n_rf_values=[4], rank_mode=RankMode.jakes, methods=["cgac", "psoac", "magiq"],
                      q_realizations=2, analytic=True)
    events = []
    trace_activate(hook=lambda event, fields: events.append(fields), design=True)
    points = run_sweep(spec)
    # one design per (snr, method), none for the second realization
    assert len(events) == 2 * 3
    for p in points:
        assert p.n_trials == 8


def test_quantized_and_hardware_sweeps_run():
    quantized = run_sweep(small_spec(quantization=QuantizationSpec()))
    hardware = run_sweep(small_spec(hardware=True))
    plain = by_key(run_sweep(small_spec()))
    for points in (quantized, hardware):
        for p in points:
            assert p.n_trials == 12
            if p.method in ("fully_digital", "selection"):
                assert p.nmse_mean == pytest.approx(plain[(p.method, p.n_rf, p.snr_db)].nmse_mean, rel=1e-9)


def test_perturbed_sweep_runs():
    from rfcombiner.hardware_emulation import Perturbation

    spec = small_spec(quantization=QuantizationSpec(perturbation=Perturbation(0.1, 0.06)))
    assert "gain_err_db=0.1" in spec.as_dict()["quantization"]
    assert all(p.n_trials == 12 for p in run_sweep(spec))


def test_failure_threshold(monkeypatch):
    def failing(*args):
        raise DegenerateTrialError("zero channel")

    monkeypatch.setattr(harness, "_score_trial", failing)
    with pytest.raises(TrialFailureThresholdError) as info:
        run_sweep(small_spec())
    assert info.value.failed == info.value.total == len(ALL_METHODS) * 2 * 12


def test_confidence_half_width():
    assert confidence_half_width([1.0]) == 0.0
    values = [1.0, 2.0, 4.0]
    expected = Z95 * np.std(values, ddof=1) / np.sqrt(3)
    assert confidence_half_width(values) == pytest.approx(expected)
    assert Z95 == pytest.approx(1.959964, abs=1e-6)


def test_cross_check():
    events = []
    trace_activate(hook=lambda event, fields: events.append(fields), cross_check=True)
    errors = [1.0, 1.1, 0.9, 1.0]
    assert harness._cross_check(errors, 1.0, "cgac", 0, 10.0, 2)
    assert not harness._cross_check(errors, 5.0, "cgac", 0, 10.0, 2)
    assert len(events) == 1
    assert events[0]["analytic"] == 5.0


def test_cross_check_sweep_counts_flags():
    outcome = execute_sweep(small_spec(cross_check=True, q_realizations=2, trials_per_q=20))
    assert 0 <= outcome.cross_check_flags <= 2 * 2 * len(ALL_METHODS)
    assert outcome.failed == 0
    assert outcome.total == 2 * 2 * 20 * len(ALL_METHODS)


def test_summarize():
    point = CurvePoint("cgac", 10.0, 2, 0.1, 0.01, 0.1, 20)
    summary = summarize([point])
    assert summary.rows == [point]
    assert summary.gaps == []

    points = [
        CurvePoint("psoac", 0.0, 2, 0.3, 0.0, 0.3, 1),
        CurvePoint("cgac", 0.0, 2, 0.3, 0.0, 0.3, 1),
        CurvePoint("fully_digital", 0.0, 2, 0.3, 0.0, 0.3, 1),
    ]
    summary = summarize(points)
    assert [p.method for p in summary.rows] == ["cgac", "fully_digital", "psoac"]
    assert {g[0] for g in summary.gaps} == {"psoac-cgac", "cgac-fully_digital", "psoac-fully_digital"}
    assert all(g[4] == 0.0 and g[5] == 0.0 for g in summary.gaps)
    with pytest.raises(InvalidArgumentError):
        summarize([])


def within_ci(a, b):
    return a.nmse_mean <= b.nmse_mean + a.nmse_ci95 + b.nmse_ci95


@pytest.mark.slow
def test_jakes_comparison_acceptance():
    spec = SweepSpec(
        n_bs=80, n_rf_values=[20], k=40, tau=40, snr_grid_db=[0, 5, 10, 15, 20, 25, 30],
        rank_mode=RankMode.jakes, spacing=0.2, methods=["cgac", "psoac", "magiq"],
        q_realizations=1, trials_per_q=200, mode="free",
    )
    points = by_key(run_sweep(spec))
    for snr in spec.snr_grid_db:
        cgac, psoac, magiq = (points[(m, 20, snr)] for m in ("cgac", "psoac", "magiq"))
        assert within_ci(psoac, magiq)
        assert abs(psoac.nmse_mean - cgac.nmse_mean) <= 0.05 * cgac.nmse_mean


@pytest.mark.slow
def test_regular_and_best_rank_acceptance():
    grid = [0, 5, 10, 15, 20, 25, 30]
    regular = SweepSpec(n_bs=8, n_rf_values=[4], k=3, tau=3, snr_grid_db=grid, q_realizations=1000, master_seed=7)
    points = by_key(run_sweep(regular))
    for snr in grid:
        digital, cgac, psoac, selection = (
            points[(m, 4, snr)] for m in ("fully_digital", "cgac", "psoac", "selection")
        )
        assert within_ci(digital, cgac)
        assert within_ci(cgac, psoac)
        assert within_ci(psoac, selection)
    for method in ("cgac", "psoac"):
        at_25, at_30 = points[(method, 4, 25)].nmse_mean, points[(method, 4, 30)].nmse_mean
        assert abs(at_25 - at_30) <= 0.1 * at_25

    best = SweepSpec(n_bs=8, n_rf_values=[4], k=3, tau=3, snr_grid_db=grid, rank_mode=RankMode.best,
                     methods=["fully_digital", "cgac"], q_realizations=1000, master_seed=7)
    points = by_key(run_sweep(best))
    for snr in grid:
        digital, cgac = points[("fully_digital", 4, snr)], points[("cgac", 4, snr)]
        assert abs(cgac.nmse_mean - digital.nmse_mean) <= 0.05 * digital.nmse_mean


@pytest.mark.slow
def test_rf_sweep_acceptance():
    spec = SweepSpec(n_bs=16, n_rf_values=list(range(2, 17)), k=3, tau=3, snr_grid_db=[15.0], sweep="rf",
                     methods=["fully_digital", "cgac", "psoac"], q_realizations=200, master_seed=3)
    points = by_key(run_rf_sweep(spec))
    digital = {n_rf: points[("fully_digital", n_rf, 15.0)].nmse_mean for n_rf in spec.n_rf_values}
    assert spec.regular_n_q == 10
    for method in ("cgac", "psoac"):
        assert points[(method, 16, 15.0)].nmse_mean == pytest.approx(digital[16], rel=1e-8)
    # cgac sees all of Q from n_rf = n_q on; psoac only loses the
    # directions its last few rows miss
    for method, first in (("cgac", 10), ("psoac", 15)):
        for n_rf in range(first, 17):
            gap = points[(method, n_rf, 15.0)].nmse_mean - digital[n_rf]
            assert gap <= 0.1 * digital[n_rf]
    gaps = [points[("psoac", n_rf, 15.0)].nmse_mean - digital[n_rf] for n_rf in range(10, 17)]
    assert gaps[-1] <= gaps[0]
