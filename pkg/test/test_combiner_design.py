import numpy as np
import pytest

from rfcombiner.channel_model import generate_pilots, identity_model, jakes_model, random_low_rank_model
from rfcombiner.combiner_design import (
    AlternatingState,
    Combiner,
    CombinerKind,
    alternate,
    design_combiner,
    design_psoac,
    fully_digital,
    objective_f,
    optimal_cgac,
    procrustes_v,
    project_unit_modulus,
    q_bar,
    random_selection,
    reduced_objective,
    top_eigenvectors,
    update_d,
)
from rfcombiner.estimator import ObservationModel, analytic_mse
from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.linalg import haar_unitary
from rfcombiner.lib.rng import complex_gaussian, make_rng


def inverse_sqrt(m):
    w, v = np.linalg.eigh(m)
    return (v / np.sqrt(w)) @ v.conj().T


def model_for(correlation, p_n, n_rf, k=1, rng=None):
    pilots = np.eye(k, dtype=complex) if rng is None else generate_pilots(k, k, rng)
    w = optimal_cgac(correlation, p_n, n_rf)
    return ObservationModel(w, pilots, correlation, p_n)


def test_q_bar_matches_dense_formula(rng):
    correlation = random_low_rank_model(4, 4, rng, alpha=1.5)
    p_n = 0.3
    aq = correlation.alpha * correlation.q
    m = inverse_sqrt(aq + p_n * np.eye(4))
    dense = m @ aq @ aq @ m
    assert np.max(np.abs(q_bar(correlation.q, correlation.alpha, p_n) - dense)) <= 1e-10


def test_q_bar_noiseless_is_scaled_q(rng):
    correlation = random_low_rank_model(5, 3, rng)
    assert np.allclose(q_bar(correlation.q, 2.0, 0.0), 2.0 * correlation.q, atol=1e-12)


def test_top_eigenvectors_spread_identity():
    u = top_eigenvectors(np.eye(4, dtype=complex), 2)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    # every column spreads over the whole eigenspace
    assert np.all(np.abs(u) > 0.1)


def test_cgac_is_optimal_against_random_combiners():
    for seed in range(5):
        rng = make_rng(seed)
        correlation = random_low_rank_model(4, 4, rng)
        model = model_for(correlation, 0.2, 2)
        best = objective_f(model.w, model)
        for _ in range(300):
            w = complex_gaussian(rng, (2, 4))
            assert objective_f(w, model) <= best + 1e-9


@pytest.mark.slow
def test_cgac_is_optimal_acceptance_scale():
    violations = 0
    for seed in range(20):
        rng = make_rng(seed)
        correlation = random_low_rank_model(4, 4, rng)
        model = model_for(correlation, 0.2, 2)
        best = objective_f(model.w, model, "structured")
        for _ in range(100000):
            if objective_f(complex_gaussian(rng, (2, 4)), model, "structured") > best + 1e-9:
                violations += 1
    assert violations == 0


def test_cgac_ignores_v_and_d(rng):
    correlation = random_low_rank_model(6, 5, rng)
    base = optimal_cgac(correlation, 0.1, 3)
    moved = optimal_cgac(correlation, 0.1, 3, v=haar_unitary(3, rng), d=[0.5, 2.0, 3.0])
    model = ObservationModel(base, np.eye(2), correlation, 0.1)
    assert objective_f(moved.w, model) == pytest.approx(objective_f(base.w, model), rel=1e-10)
    with pytest.raises(InvalidArgumentError):
        optimal_cgac(correlation, 0.1, 3, d=[1.0, -1.0, 1.0])


def test_reduced_objective_at_top_eigenvectors(rng):
    correlation = random_low_rank_model(6, 4, rng, alpha=1.3)
    p_n = 0.25
    model = model_for(correlation, p_n, 3, k=2, rng=rng)
    u = top_eigenvectors(q_bar(correlation.q, correlation.alpha, p_n), 3)
    expected = objective_f(model.w, model)
    value = reduced_objective(u, correlation.q, correlation.alpha, p_n, model.k)
    assert value == pytest.approx(expected, rel=1e-10)


def test_reduced_objective_random_search(rng):
    correlation = random_low_rank_model(8, 6, rng)
    u = top_eigenvectors(q_bar(correlation.q, 1.0, 0.1), 3)
    best = reduced_objective(u, correlation.q, 1.0, 0.1)
    for _ in range(500):
        candidate, _ = np.linalg.qr(complex_gaussian(rng, (8, 3)))
        assert reduced_objective(candidate, correlation.q, 1.0, 0.1) <= best + 1e-9
    with pytest.raises(InvalidArgumentError):
        reduced_objective(2 * u, correlation.q, 1.0, 0.1)


def test_unit_modulus_projection(rng):
    m = complex_gaussian(rng, (3, 3))
    p = project_unit_modulus(m)
    assert np.allclose(np.abs(p), 1.0, atol=1e-15)
    distance = np.linalg.norm(p - m)
    for _ in range(10000):
        x = np.exp(2j * np.pi * rng.uniform(size=(3, 3)))
        assert distance <= np.linalg.norm(x - m) + 1e-12
    assert project_unit_modulus(np.zeros((1, 2))).tolist() == [[1.0, 1.0]]


def procrustes_instance(rng):
    correlation = random_low_rank_model(6, 5, rng)
    u = top_eigenvectors(q_bar(correlation.q, 1.0, 0.2), 3)
    w = np.exp(2j * np.pi * rng.uniform(size=(3, 6)))
    d = np.diag(rng.uniform(0.5, 3.0, size=3)).astype(complex)
    return w, u, d


def test_procrustes_beats_random_unitaries():
    for seed in range(5):
        rng = make_rng(100 + seed)
        w, u, d = procrustes_instance(rng)
        v = procrustes_v(w, u, d)
        assert np.allclose(v.conj().T @ v, np.eye(3), atol=1e-12)
        residual = np.linalg.norm(w - v @ d @ u.conj().T)
        for _ in range(1000):
            x = haar_unitary(3, rng)
            assert residual <= np.linalg.norm(w - x @ d @ u.conj().T) + 1e-12


def test_diagonal_step_matches_grid_scan():
    eta = 1e-6
    grid = np.linspace(eta, 10.0, 100001)
    for seed in range(5):
        rng = make_rng(200 + seed)
        w, u, d = procrustes_instance(rng)
        v = procrustes_v(w, u, d)
        d_new = np.real(np.diag(update_d(w, v, u, eta)))
        for l in range(3):
            rest = w - sum(d_new[m] * np.outer(v[:, m], u[:, m].conj()) for m in range(3) if m != l)
            term = np.outer(v[:, l], u[:, l].conj())
            scan = [np.linalg.norm(rest - x * term) for x in grid[::100]]
            best = grid[::100][int(np.argmin(scan))]
            assert abs(d_new[l] - best) <= 2 * (grid[100] - grid[0])
            assert np.linalg.norm(rest - d_new[l] * term) <= min(scan) + 1e-12
    with pytest.raises(InvalidArgumentError):
        update_d(w, v, u, 0.0)


def test_psoac_design_is_feasible_and_monotone(rng):
    correlation = random_low_rank_model(8, 6, rng)
    combiner = design_psoac(correlation, 0.1, 4)
    assert combiner.kind == CombinerKind.phase_only
    assert np.max(np.abs(np.abs(combiner.w) - 1.0)) <= 1e-12
    history = combiner.design_meta["residual_history"]
    assert combiner.design_meta["iterations"] == len(history)
    assert history[-1] <= history[0]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(history, history[1:]))
    assert np.all(combiner.design_meta["d"] >= combiner.design_meta["eta"])


def test_magiq_residual_is_not_smaller(rng):
    correlation = jakes_model(16, 0.2)
    psoac = design_combiner("psoac", correlation, 0.1, 4)
    magiq = design_combiner("magiq", correlation, 0.1, 4)
    assert magiq.design_meta["method"] == "magiq"
    assert magiq.design_meta["residual"] >= psoac.design_meta["residual"]


def test_psoac_respects_max_iters(rng):
    correlation = random_low_rank_model(8, 6, rng)
    combiner = design_psoac(correlation, 0.1, 4, {"max_iters": 3, "tol": 0.0})
    # both stages spend the whole budget
    assert combiner.design_meta["magiq_iterations"] == 3
    assert combiner.design_meta["iterations"] == 6
    assert not combiner.design_meta["converged"]
    with pytest.raises(InvalidArgumentError):
        design_psoac(correlation, 0.1, 4, {"max_iters": 0})


@pytest.mark.slow
def test_alternating_design_monotone_acceptance_scale():
    violations = 0
    for seed in range(100):
        rng = make_rng(seed)
        n_bs = 8 if seed % 2 else 16
        correlation = random_low_rank_model(n_bs, n_bs - 2, rng)
        history = design_psoac(correlation, 0.1, n_bs // 2).design_meta["residual_history"]
        violations += sum(b > a * (1 + 1e-12) for a, b in zip(history, history[1:]))
    assert violations == 0


def test_random_selection_frequencies():
    rng = make_rng(9)
    counts = np.zeros(4)
    draws = 20000
    for _ in range(draws):
        counts[random_selection(4, 2, rng).design_meta["antennas"]] += 1
    assert np.allclose(counts / draws, 0.5, atol=0.02)


def test_selection_and_fully_digital(rng):
    selection = random_selection(6, 3, rng)
    assert selection.kind == CombinerKind.selection
    assert np.array_equal(np.sort(np.nonzero(selection.w)[1]), selection.design_meta["antennas"])
    assert np.array_equal(fully_digital(4).w, np.eye(4))
    with pytest.raises(InvalidArgumentError):
        random_selection(4, 5, rng)


def test_combiner_kind_invariants():
    with pytest.raises(InvalidArgumentError):
        Combiner(2 * np.ones((2, 4)), CombinerKind.phase_only)
    with pytest.raises(InvalidArgumentError):
        Combiner(np.eye(4)[[1, 1]], CombinerKind.selection)
    with pytest.raises(InvalidArgumentError):
        Combiner(2 * np.eye(3), CombinerKind.fully_digital)
    with pytest.raises(InvalidArgumentError):
        Combiner(np.ones((5, 4)), CombinerKind.complex_gain)
    combiner = Combiner(np.ones((2, 4)), CombinerKind.phase_only, {"method": "test"})
    replaced = combiner.replace(-np.ones((2, 4)), note="flipped")
    assert replaced.kind == CombinerKind.phase_only
    assert replaced.design_meta == {"method": "test", "note": "flipped"}


def test_full_array_cgac_matches_fully_digital():
    correlation = identity_model(4)
    cgac = design_combiner("cgac", correlation, 0.1, 4)
    pilots = np.eye(1)
    reduced = analytic_mse(ObservationModel(cgac, pilots, correlation, 0.1))
    full = analytic_mse(ObservationModel(fully_digital(4), pilots, correlation, 0.1))
    assert reduced == pytest.approx(full, rel=1e-10)


def test_design_combiner_rejects_unknown_method(rng):
    correlation = identity_model(4)
    with pytest.raises(InvalidArgumentError):
        design_combiner("dft", correlation, 0.1, 2)
    with pytest.raises(InvalidArgumentError):
        design_combiner("selection", correlation, 0.1, 2)
    assert design_combiner("selection", correlation, 0.1, 2, rng).kind == CombinerKind.selection


def test_psoac_is_deterministic(rng):
    correlation = random_low_rank_model(8, 6, rng)
    first = design_psoac(correlation, 0.1, 4)
    second = design_psoac(correlation, 0.1, 4)
    assert np.array_equal(first.w, second.w)
    assert first.design_meta["residual_history"] == second.design_meta["residual_history"]


@pytest.mark.parametrize("p_n", [1.0, 0.1, 0.01])
def test_real_correlation_gets_complex_phases(p_n):
    correlation = jakes_model(16, 0.2)
    psoac = design_combiner("psoac", correlation, p_n, 4)
    magiq = design_combiner("magiq", correlation, p_n, 4)
    for combiner in (psoac, magiq):
        assert np.max(np.abs(combiner.w.imag)) > 0.1
    pilots = np.eye(1)
    mse = {
        c.design_meta["method"]: analytic_mse(ObservationModel(c, pilots, correlation, p_n))
        for c in (psoac, magiq)
    }
    assert mse["psoac"] <= mse["magiq"] * (1 + 1e-12)


def test_diagonal_step_moves_magiq_fixed_point():
    correlation = jakes_model(16, 0.2)
    u = top_eigenvectors(q_bar(correlation.q, 1.0, 0.1), 4)
    magiq = design_combiner("magiq", correlation, 0.1, 4)
    v = procrustes_v(magiq.w, u, np.eye(4, dtype=complex))
    d = np.real(np.diag(update_d(magiq.w, v, u, 1e-6)))
    assert np.ptp(d) > 1e-3
    with_d = project_unit_modulus(v @ np.diag(d) @ u.conj().T)
    without_d = project_unit_modulus(v @ u.conj().T)
    assert np.linalg.norm(with_d - without_d) > 1e-6


def test_alternate_keeps_best_scoring_iterate(rng):
    correlation = random_low_rank_model(8, 6, rng)
    u = top_eigenvectors(q_bar(correlation.q, 1.0, 0.1), 4)
    eye = np.eye(4, dtype=complex)
    state = AlternatingState(np.ones((4, 8), dtype=complex), eye, eye, u, 1e-6)
    scores = []

    def score(w):
        scores.append(-np.linalg.norm(w - np.ones((4, 8))))
        return scores[-1]

    history, _, best = alternate(state, 5, 0.0, True, "psoac", score)
    assert len(scores) == len(history) + 1
    assert best[0] == max(scores)
    # the all-ones start is the best possible under this score
    assert np.array_equal(best[1], np.ones((4, 8)))
