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

from rfcombiner.processor.command.base_cmd import CliCommand, CommandArgumentParser
from rfcombiner.processor.sweep_options import add_sweep_arguments, run_and_report, spec_from_args


class SnrSweepCommand(CliCommand):
    """**snr-sweep** [*options*]

    Normalized MSE versus SNR at a fixed number of RF chains.

    For every correlation realization and SNR point each method designs
    its combiner, then scores `--trials-per-q` trials with fresh
    channel, pilots and noise. Writes `results.csv`, `manifest.txt`,
    `summary.txt` and one plot per RF-chain count to the output
    directory.

    Examples:
    --------

        snr-sweep --n-bs 8 --n-rf 4 --k 3 --tau 3 --rank regular --snr 0:5:30 --seed 7
        snr-sweep --rank best --methods cgac,fully_digital --q-realizations 200

    See also:
    ---------

    `rf-sweep`, `design`"""

    short_help = "NMSE versus SNR"
    uses_config = True

    CliCommand.setup(locals(), category="experiments")

    def make_parser(self):
        parser = CommandArgumentParser(prog=self.name, description=self.short_help)
        return add_sweep_arguments(parser, "snr")

    def run(self, args, config=None) -> int:
        options = self.parse(args, config)
        spec = spec_from_args(options, "snr", self.settings)
        plots = self.settings["plots"] and not options.no_plots
        return run_and_report(self, spec, args, plots)

    pass
