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
"""Seeded random streams.

Every random draw in the package goes through a ``numpy.random.Generator``
backed by the counter-based Philox bit generator. Substreams are derived
from a master seed and a tuple of integer indices via ``SeedSequence``
spawn keys, so a trial's stream depends only on *where* it sits in the
experiment grid and never on the order trials are executed in.
"""

from typing import Optional, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, None]


def make_rng(seed: SeedLike = None) -> np.random.Generator:
    """Return a Philox-backed generator for ``seed``."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def substream(master_seed: Optional[int], *indices: int) -> np.random.Generator:
    """Generator for the grid cell ``indices`` under ``master_seed``.

    ``substream(7, 3, 10)`` is the stream of, say, Q realization 3 and
    trial 10. Identical arguments give bit-identical draws.
    """
    for index in indices:
        if index < 0:
            raise ValueError(f"substream indices must be non-negative; got {indices}")
    sequence = np.random.SeedSequence(master_seed, spawn_key=tuple(int(i) for i in indices))
    return make_rng(sequence)


def as_rng(rng: Union[np.random.Generator, SeedLike]) -> np.random.Generator:
    """Accept either a generator or anything ``make_rng`` accepts."""
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Draw i.i.d. CN(0, ``variance``) entries: each of the real and
    imaginary parts is N(0, variance/2)."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
