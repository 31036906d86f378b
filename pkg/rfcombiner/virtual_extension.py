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
"""Virtual channel extension.

The analog board combines 4 antenna inputs into 2 outputs. A larger
N_rf × N_bs combiner is realized by cutting it into 2 × 4 blocks and
running the board once per block over the matching slice of antenna
signals; the partial outputs of one row of blocks are summed.
"""

from typing import Callable, Optional

import numpy as np

from rfcombiner.lib.exception import DimensionMismatchError

BASIC_ROWS = 2
BASIC_COLS = 4


def _padded(size: int, step: int) -> int:
    return -(-size // step) * step


class BlockPlan:
    """``grid[r, c]`` is the 2 × 4 block feeding output rows
    [2r, 2r + 2) from antennas [4c, 4c + 4). Shapes that are not a
    multiple of the block are zero-padded."""

    basic_rows = BASIC_ROWS
    basic_cols = BASIC_COLS

    def __init__(self, n_bs: int, n_rf: int, grid: np.ndarray):
        self.n_bs = n_bs
        self.n_rf = n_rf
        self.grid = grid

    @property
    def grid_shape(self):
        return self.grid.shape[:2]

    @property
    def pass_count(self) -> int:
        rows, cols = self.grid_shape
        return rows * cols

    def reassemble(self) -> np.ndarray:
        """The target matrix, padding stripped."""
        rows, cols = self.grid_shape
        full = self.grid.transpose(0, 2, 1, 3).reshape(rows * BASIC_ROWS, cols * BASIC_COLS)
        return full[: self.n_rf, : self.n_bs]

    def __repr__(self):
        rows, cols = self.grid_shape
        return f"<BlockPlan {self.n_rf}x{self.n_bs} as {rows}x{cols} blocks>"

    pass


def partition(w: np.ndarray) -> BlockPlan:
    w = np.atleast_2d(np.asarray(getattr(w, "w", w), dtype=complex))
    n_rf, n_bs = w.shape
    padded = np.zeros((_padded(n_rf, BASIC_ROWS), _padded(n_bs, BASIC_COLS)), dtype=complex)
    padded[:n_rf, :n_bs] = w
    rows = padded.shape[0] // BASIC_ROWS
    cols = padded.shape[1] // BASIC_COLS
    grid = padded.reshape(rows, BASIC_ROWS, cols, BASIC_COLS).transpose(0, 2, 1, 3).copy()
    return BlockPlan(n_bs, n_rf, grid)


def apply_sequential(
    plan: BlockPlan,
    x: np.ndarray,
    on_pass: Optional[Callable[[int, int], None]] = None,
) -> np.ndarray:
    """Combine the N_bs × τ antenna signals ``x`` one block at a time.

    ``on_pass(r, c)`` is called before each 2 × 4 block multiply. Blocks
    are applied in row-major order, which fixes the summation order.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    if x.shape[0] != plan.n_bs:
        raise DimensionMismatchError(
            f"signal has {x.shape[0]} antenna rows; the plan expects {plan.n_bs}"
        )
    rows, cols = plan.grid_shape
    x_padded = np.zeros((cols * BASIC_COLS, x.shape[1]), dtype=complex)
    x_padded[: plan.n_bs] = x
    y = np.zeros((rows * BASIC_ROWS, x.shape[1]), dtype=complex)
    for r in range(rows):
        accumulator = np.zeros((BASIC_ROWS, x.shape[1]), dtype=complex)
        for c in range(cols):
            if on_pass is not None:
                on_pass(r, c)
            accumulator += plan.grid[r, c] @ x_padded[c * BASIC_COLS : (c + 1) * BASIC_COLS]
        y[r * BASIC_ROWS : (r + 1) * BASIC_ROWS] = accumulator
    return y[: plan.n_rf]
