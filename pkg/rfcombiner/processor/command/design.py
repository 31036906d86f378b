# -*- coding: utf-8 -*-
#
#  Copyright (C) 2025 The RF-Combiner Team
#
#  This program is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License as published by
#  the Free Software Foundation, either version 3 of the License, or
#  (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program.  If not, see <http://www.gnu.org/licenses/>.
import os.path as osp

import numpy as np

from rfcombiner.channel_model import (
    identity_model,
    jakes_model,
    random_low_rank_model,
    snr_db_to_noise_variance,
)
from rfcombiner.combiner_design import design_combiner, fully_digital
from rfcombiner.estimator import ObservationModel, analytic_mse
from rfcombiner.lib import results
from rfcombiner.lib.format import format_table
from rfcombiner.lib.rng import make_rng
from rfcombiner.processor.command.base_cmd import CliCommand, CommandArgumentParser


class DesignCommand(CliCommand):
    """**design** [*options*]

    Design one combiner and write it to a text file.

    The file starts with `#` lines carrying the design metadata,
    followed by one line per row of whitespace-separated `re,im` pairs.
    The analytic MSE of the design, its normalized value and that of a
    fully-digital receiver are printed, together with the final
    residual of the alternating design.

    Examples:
    --------

        design --method psoac --n-bs 16 --n-rf 4 --q jakes --spacing 0.2
        design --method psoac --magiq --q random --n-q 6 --seed 3
        design --method cgac --n-bs 8 --n-rf 8 --q identity

    See also:
    ---------

    `snr-sweep`, `validate`"""

    short_help = "Design a combiner and write it to a file"

    CliCommand.setup(locals(), category="experiments")

    def make_parser(self):
        parser = CommandArgumentParser(prog=self.name, description=self.short_help)
        parser.add_argument("--method", choices=("cgac", "psoac", "magiq"), default="psoac")
        parser.add_argument("--n-bs", type=int, default=8)
        parser.add_argument("--n-rf", type=int, default=4)
        parser.add_argument("--k", type=int, default=1, help="users the MSE is reported for (default 1)")
        parser.add_argument("--q", choices=("identity", "random", "jakes"), default="random")
        parser.add_argument("--n-q", type=int, default=None, help="rank of a random Q (default n_bs)")
        parser.add_argument("--spacing", type=float, default=0.2)
        parser.add_argument("--snr-db", type=float, default=15.0)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--alpha", type=float, default=1.0)
        parser.add_argument("--eta", type=float, default=None)
        parser.add_argument("--max-iters", type=int, default=None)
        parser.add_argument("--tol", type=float, default=None)
        parser.add_argument("--magiq", action="store_true", help="keep D fixed at the identity")
        parser.add_argument("--output", default=None, help="matrix file (default OUTDIR/combiner_METHOD.txt)")
        return parser

    def run(self, args, config=None) -> int:
        options = self.parse(args, config)
        rng = make_rng(options.seed)
        if options.q == "identity":
            correlation = identity_model(options.n_bs, options.alpha)
        elif options.q == "jakes":
            correlation = jakes_model(options.n_bs, options.spacing, options.alpha)
        else:
            n_q = options.n_bs if options.n_q is None else options.n_q
            correlation = random_low_rank_model(options.n_bs, n_q, rng, options.alpha)

        method = "magiq" if options.magiq and options.method == "psoac" else options.method
        p_n = snr_db_to_noise_variance(options.snr_db)
        design_options = {"eta": options.eta, "max_iters": options.max_iters, "tol": options.tol}
        combiner = design_combiner(method, correlation, p_n, options.n_rf, rng, design_options)

        pilots = np.eye(options.k, dtype=complex)
        mse = analytic_mse(ObservationModel(combiner, pilots, correlation, p_n), "structured")
        reference = analytic_mse(ObservationModel(fully_digital(options.n_bs), pilots, correlation, p_n), "structured")
        energy = correlation.channel_energy(options.k)

        meta = {
            "method": method,
            "kind": combiner.kind.name,
            "n_bs": options.n_bs,
            "n_rf": options.n_rf,
            "q": correlation.describe(),
            "alpha": options.alpha,
            "snr_db": options.snr_db,
            "seed": options.seed,
            "analytic_mse": mse,
        }
        rows = [("analytic_mse", mse), ("normalized_mse", mse / energy),
                ("fully_digital_nmse", reference / energy)]
        for key in ("iterations", "residual", "converged"):
            if key in combiner.design_meta:
                meta[key] = combiner.design_meta[key]
                rows.append((key, combiner.design_meta[key]))

        output = options.output
        if output is None:
            outdir = results.ensure_outdir(self.settings["outdir"])
            output = osp.join(outdir, f"combiner_{method}.txt")
        results.write_matrix(output, combiner.w, meta)

        self.section(f"{method} combiner, {options.n_rf}x{options.n_bs}, {correlation.describe()}")
        self.msg(format_table(("quantity", "value"), rows))
        self.msg(f"wrote {output}")
        return 0

    pass
