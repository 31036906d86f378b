"""
Analog combiner design for RF-chain-reduced MIMO receivers

The library builds spatial correlation models, designs analog
combiners (complex-gain, phase-only, antenna selection), evaluates the
MMSE channel estimate they allow, emulates the prototype board's
resolution limits and runs the Monte-Carlo sweeps that compare them.
"""

from rfcombiner.channel_model import (
    CorrelationModel,
    draw_realization,
    generate_pilots,
    jakes_correlation,
    jakes_model,
    random_low_rank_correlation,
    random_low_rank_model,
)
from rfcombiner.combiner_design import (
    Combiner,
    CombinerKind,
    design_combiner,
    design_psoac,
    fully_digital,
    objective_f,
    optimal_cgac,
    random_selection,
)
from rfcombiner.estimator import (
    ObservationModel,
    analytic_mse,
    mmse_estimate,
    normalized_mse,
    observe,
)
from rfcombiner.hardware_emulation import QuantizationSpec, perturb, quantize
from rfcombiner.harness import RankMode, SweepSpec, run_rf_sweep, run_sweep, summarize
from rfcombiner.virtual_extension import apply_sequential, partition
from rfcombiner.version import __version__

# These are the publicly exported names
__all__ = [
    "Combiner",
    "CombinerKind",
    "CorrelationModel",
    "ObservationModel",
    "QuantizationSpec",
    "RankMode",
    "SweepSpec",
    "__version__",
    "analytic_mse",
    "apply_sequential",
    "design_combiner",
    "design_psoac",
    "draw_realization",
    "fully_digital",
    "generate_pilots",
    "jakes_correlation",
    "jakes_model",
    "mmse_estimate",
    "normalized_mse",
    "objective_f",
    "observe",
    "optimal_cgac",
    "partition",
    "perturb",
    "quantize",
    "random_low_rank_correlation",
    "random_low_rank_model",
    "random_selection",
    "run_rf_sweep",
    "run_sweep",
    "summarize",
]
