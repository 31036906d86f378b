import numpy as np
import pytest

from rfcombiner.combiner_design import design_psoac
from rfcombiner.channel_model import jakes_model
from rfcombiner.lib.exception import DimensionMismatchError
from rfcombiner.lib.rng import complex_gaussian
from rfcombiner.virtual_extension import BlockPlan, apply_sequential, partition


@pytest.mark.parametrize("n_rf, n_bs, grid_shape", [(2, 4, (1, 1)), (4, 8, (2, 2)), (8, 16, (4, 4))])
def test_partition_grid(n_rf, n_bs, grid_shape, rng):
    w = complex_gaussian(rng, (n_rf, n_bs))
    plan = partition(w)
    assert isinstance(plan, BlockPlan)
    assert plan.grid_shape == grid_shape
    assert plan.pass_count == grid_shape[0] * grid_shape[1]
    assert np.array_equal(plan.reassemble(), w)
    assert np.array_equal(plan.grid[-1, -1], w[-2:, -4:])


def test_single_block_is_the_matrix(rng):
    w = complex_gaussian(rng, (2, 4))
    plan = partition(w)
    assert np.array_equal(plan.grid[0, 0], w)
    x = complex_gaussian(rng, (4, 3))
    assert np.array_equal(apply_sequential(plan, x), w @ x)


@pytest.mark.parametrize("n_rf, n_bs, passes", [(4, 8, 4), (8, 16, 16)])
def test_sequential_passes_equal_direct_multiply(n_rf, n_bs, passes, rng):
    worst = 0.0
    for _ in range(10000):
        w = complex_gaussian(rng, (n_rf, n_bs))
        x = complex_gaussian(rng, (n_bs, 2))
        worst = max(worst, float(np.max(np.abs(apply_sequential(partition(w), x) - w @ x))))
    assert worst <= 1e-12

    seen = []
    apply_sequential(partition(w), x, on_pass=lambda r, c: seen.append((r, c)))
    assert len(seen) == passes
    assert seen == sorted(seen)


def test_non_divisible_shapes_are_padded(rng):
    w = complex_gaussian(rng, (3, 6))
    plan = partition(w)
    assert plan.grid_shape == (2, 2)
    assert plan.grid[1, 1][1].tolist() == [0, 0, 0, 0]
    x = complex_gaussian(rng, (6, 5))
    y = apply_sequential(plan, x)
    assert y.shape == (3, 5)
    assert np.allclose(y, w @ x, atol=1e-12)


def test_partition_accepts_combiner():
    combiner = design_psoac(jakes_model(8, 0.2), 0.1, 4)
    assert np.array_equal(partition(combiner).reassemble(), combiner.w)


def test_signal_shape_is_checked(rng):
    plan = partition(complex_gaussian(rng, (4, 8)))
    with pytest.raises(DimensionMismatchError):
        apply_sequential(plan, np.zeros((6, 2)))
