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
"""A base class for rfcombiner commands.

This file is the one module in this directory that isn't a real command
and cmdproc.py needs to take care to avoid instantiating this class
and storing it as a list of known commands.
"""

import argparse
from typing import Any, Dict, List, Optional

import columnize
from pygments.console import colorize

from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.settings import normalize_key

NotImplementedMessage = "This method must be overridden in a subclass"

__all__ = ["CliCommand", "CommandArgumentParser"]

# Config-file keys the command processor consumes itself.
GLOBAL_KEYS = ("config", "outdir", "trace", "highlight", "mode", "style", "width")

TRUE_STRINGS = ("1", "yes", "true", "on")
FALSE_STRINGS = ("0", "no", "false", "off")


class CommandArgumentParser(argparse.ArgumentParser):
    """An ArgumentParser that raises instead of exiting on bad input."""

    def error(self, message):
        raise InvalidArgumentError(f"{self.prog}: {message}")


class CliCommand:
    """Base class for commands. A command gets its arguments as a list
    of strings (the command name first) and returns an exit code."""

    category = "misc"

    @staticmethod
    def setup(local_dict, category="misc", min_args=0, max_args=None):
        local_dict["name"] = local_dict["__module__"].split(".")[-1].replace("_", "-")
        local_dict["category"] = category
        local_dict["min_args"] = min_args
        local_dict["max_args"] = max_args
        return

    def __init__(self, proc):
        """proc is the command processor this command runs under; it
        holds the settings and the output interfaces."""
        self.proc = proc
        self.settings = proc.settings
        return

    aliases = ()
    name = "YourCommandName"
    short_help = ""
    # Whether config-file keys other than the global ones are meant for this command.
    uses_config = False

    def columnize_commands(self, commands):
        """List commands arranged in an aligned columns"""
        commands.sort()
        width = self.settings["width"]
        return columnize.columnize(commands, displaywidth=width, lineprefix="    ")

    # Look the interface up on every call; a caller may push a new one.
    def errmsg(self, msg, opts={}):
        return self.proc.intf[-1].errmsg(msg)

    def msg(self, msg, opts={}):
        return self.proc.intf[-1].msg(msg)

    def msg_nocr(self, msg: str, opts={}):
        return self.proc.intf[-1].msg_nocr(msg)

    def section(self, message, opts={}):
        if "plain" != self.settings["highlight"]:
            message = colorize("bold", message)
        else:
            message += "\n" + "-" * len(message)
            pass
        self.msg(message)

    def make_parser(self) -> Optional[CommandArgumentParser]:
        """The option parser of this command; None for commands that
        take plain positional words."""
        return None

    def parse(self, args: List[str], config: Optional[Dict[str, str]] = None) -> argparse.Namespace:
        """Parse ``args[1:]``. Config-file values become parser
        defaults, so flags given on the command line win."""
        parser = self.make_parser()
        if config:
            apply_config(parser, config)
        return parser.parse_args(args[1:])

    def run(self, args, config=None) -> int:
        """The method that implements the command.
        Help on the command comes from the docstring of the class.
        """
        raise NotImplementedError(NotImplementedMessage)

    pass


def apply_config(parser: argparse.ArgumentParser, config: Dict[str, Any]):
    """Install config-file ``key = value`` pairs as parser defaults."""
    by_dest = {action.dest: action for action in parser._actions}
    defaults = {}
    for key, value in config.items():
        dest = normalize_key(key)
        if dest in GLOBAL_KEYS:
            continue
        action = by_dest.get(dest)
        if action is None or dest == "help":
            raise InvalidArgumentError(f"{parser.prog}: unknown config key {key!r}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            text = str(value).strip().lower()
            if text in TRUE_STRINGS:
                flag = True
            elif text in FALSE_STRINGS:
                flag = False
            else:
                raise InvalidArgumentError(f"{parser.prog}: {key} must be a boolean; got {value!r}")
            # A store_false action's dest holds the inverted value.
            defaults[dest] = flag if isinstance(action, argparse._StoreTrueAction) else not flag
        else:
            defaults[dest] = value
    parser.set_defaults(**defaults)
