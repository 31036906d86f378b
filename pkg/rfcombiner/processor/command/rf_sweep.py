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


class RfSweepCommand(CliCommand):
    """**rf-sweep** [*options*]

    Normalized MSE versus the number of RF chains at one SNR.

    The RF-chain counts default to 2, 3, ..., *n_bs*; give
    `--n-rf-list` to pick others. Output files are those of
    `snr-sweep`, with a single plot over the RF-chain axis.

    Examples:
    --------

        rf-sweep --n-bs 16 --snr-db 15
        rf-sweep --n-bs 8 --n-rf-list 2,4,6,8 --methods cgac,psoac,fully_digital

    See also:
    ---------

    `snr-sweep`"""

    short_help = "NMSE versus number of RF chains"
    uses_config = True

    CliCommand.setup(locals(), category="experiments")

    def make_parser(self):
        parser = CommandArgumentParser(prog=self.name, description=self.short_help)
        return add_sweep_arguments(parser, "rf")

    def run(self, args, config=None) -> int:
        options = self.parse(args, config)
        spec = spec_from_args(options, "rf", self.settings)
        plots = self.settings["plots"] and not options.no_plots
        return run_and_report(self, spec, args, plots)

    pass
