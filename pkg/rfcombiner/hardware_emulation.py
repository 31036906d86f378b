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
"""Weight resolution of the analog board.

Phase-only weights are snapped to a uniform phase grid (256 levels,
1.40625°, by default). Complex-gain weights are snapped component-wise
to a uniform DAC grid of 2**dac_bits levels. Gain and phase errors of
the vector modulators can be added on top with ``perturb``.
"""

from typing import NamedTuple, Optional

import numpy as np

from rfcombiner.combiner_design import Combiner, CombinerKind
from rfcombiner.lib.exception import InvalidArgumentError

DEFAULT_PHASE_LEVELS = 256

# Phase resolution the board guarantees.
BOARD_MAX_PHASE_STEP_DEG = 1.5


class Perturbation(NamedTuple):
    gain_err_db: float = 0.0
    phase_err_deg: float = 0.0


class QuantizationSpec:
    """``phase_step_deg`` of 0 disables phase quantization and
    ``dac_bits`` of None disables the complex-gain DAC grid."""

    def __init__(
        self,
        dac_bits: Optional[int] = 10,
        phase_step_deg: float = 360.0 / DEFAULT_PHASE_LEVELS,
        perturbation: Optional[Perturbation] = None,
        board: bool = True,
    ):
        if dac_bits is not None and dac_bits < 1:
            raise InvalidArgumentError(f"dac_bits must be at least 1; got {dac_bits}")
        if phase_step_deg < 0:
            raise InvalidArgumentError(f"phase step must be nonnegative; got {phase_step_deg}")
        if board and phase_step_deg > BOARD_MAX_PHASE_STEP_DEG:
            raise InvalidArgumentError(
                f"phase step {phase_step_deg:g}° is coarser than the board's "
                f"{BOARD_MAX_PHASE_STEP_DEG:g}°"
            )
        if perturbation is not None and (perturbation.gain_err_db < 0 or perturbation.phase_err_deg < 0):
            raise InvalidArgumentError("perturbation bounds must be nonnegative")
        self.dac_bits = dac_bits
        self.phase_step_deg = float(phase_step_deg)
        self.perturbation = perturbation
        self.board = board

    @property
    def gain_levels(self) -> Optional[int]:
        return None if self.dac_bits is None else 2**self.dac_bits

    def describe(self) -> str:
        text = f"phase_step_deg={self.phase_step_deg:g} dac_bits={self.dac_bits}"
        if self.perturbation is not None:
            text += (
                f" gain_err_db={self.perturbation.gain_err_db:g}"
                f" phase_err_deg={self.perturbation.phase_err_deg:g}"
            )
        return text

    def __repr__(self):
        return f"<QuantizationSpec {self.describe()}>"

    pass


def quantize_phases(w: np.ndarray, step_deg: float) -> np.ndarray:
    """Unit-modulus matrix whose phases are the grid points nearest to
    the phases of ``w``."""
    w = np.asarray(w, dtype=complex)
    if step_deg == 0:
        return w.copy()
    degrees = np.mod(np.degrees(np.angle(w)), 360.0)
    snapped = np.round(degrees / step_deg) * step_deg
    # 0° is nearer than any grid point past 360°
    snapped = np.where(snapped >= 360.0, 0.0, snapped)
    return np.exp(1j * np.radians(snapped))


def quantize_components(w: np.ndarray, dac_bits: int) -> np.ndarray:
    """Snap real and imaginary parts to 2**dac_bits uniform levels on
    [−A, A], where A is the largest component magnitude of ``w``."""
    w = np.asarray(w, dtype=complex)
    full_scale = float(max(np.max(np.abs(w.real)), np.max(np.abs(w.imag)))) if w.size else 0.0
    if full_scale == 0.0:
        return w.copy()
    levels = 2**dac_bits
    if levels < 2:
        return w.copy()
    step = 2.0 * full_scale / (levels - 1)

    def snap(x):
        index = np.clip(np.round((x + full_scale) / step), 0, levels - 1)
        return -full_scale + index * step

    return snap(w.real) + 1j * snap(w.imag)


def quantize(combiner: Combiner, spec: QuantizationSpec) -> Combiner:
    """Board-realizable version of ``combiner``; the kind is kept.
    Selection and fully-digital combiners pass through unchanged."""
    if combiner.kind == CombinerKind.phase_only:
        w = quantize_phases(combiner.w, spec.phase_step_deg)
    elif combiner.kind == CombinerKind.complex_gain and spec.dac_bits is not None:
        w = quantize_components(combiner.w, spec.dac_bits)
    else:
        return combiner
    return combiner.replace(w, quantized=spec.describe())


def perturb(combiner: Combiner, spec: QuantizationSpec, rng: np.random.Generator) -> Combiner:
    """Multiply every entry by 10^{g/20}·e^{jφ} with g uniform in
    ±gain_err_db and φ uniform in ±phase_err_deg.

    A gain error takes phase-only and selection weights off their
    feasible sets, so the result is then tagged complex-gain.
    """
    if spec.perturbation is None:
        raise InvalidArgumentError("quantization spec has no perturbation set")
    gain_db, phase_deg = spec.perturbation
    if gain_db == 0 and phase_deg == 0:
        return combiner
    shape = combiner.w.shape
    g = rng.uniform(-gain_db, gain_db, size=shape)
    phi = np.radians(rng.uniform(-phase_deg, phase_deg, size=shape))
    w = combiner.w * 10.0 ** (g / 20.0) * np.exp(1j * phi)

    meta = dict(combiner.design_meta)
    meta["perturbed"] = spec.describe()
    kind = combiner.kind
    keeps_kind = kind == CombinerKind.complex_gain or (kind == CombinerKind.phase_only and gain_db == 0)
    if not keeps_kind:
        meta["source_kind"] = kind.name
        kind = CombinerKind.complex_gain
    return Combiner(w, kind, meta)
