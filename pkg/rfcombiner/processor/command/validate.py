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

from rfcombiner.lib.format import format_table
from rfcombiner.processor.command.base_cmd import CliCommand, CommandArgumentParser
from rfcombiner.validate import run_invariant_suite


class ValidateCommand(CliCommand):
    """**validate** [**--seed** *seed*]

    Run the invariant suite on small random instances and report each
    check. The exit code is 0 when every check passes and 1 otherwise.

    See also:
    ---------

    `design`"""

    short_help = "Check the library's invariants"

    CliCommand.setup(locals(), category="support")

    def make_parser(self):
        parser = CommandArgumentParser(prog=self.name, description=self.short_help)
        parser.add_argument("--seed", type=int, default=0)
        return parser

    def run(self, args, config=None) -> int:
        options = self.parse(args, config)
        checks = run_invariant_suite(options.seed)
        rows = [("pass" if c.passed else "FAIL", c.name, c.detail) for c in checks]
        self.section("Invariant checks:")
        self.msg(format_table(("result", "check", "detail"), rows))
        failed = [c.name for c in checks if not c.passed]
        if failed:
            self.errmsg(f"{len(failed)} of {len(checks)} checks failed: {', '.join(failed)}")
            return 1
        self.msg(f"all {len(checks)} checks passed")
        return 0

    pass
