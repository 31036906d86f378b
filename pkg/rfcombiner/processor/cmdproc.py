# -*- coding: utf-8 -*-
#
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
"""Command lookup and dispatch.

The processor parses the global options, loads a config file if one
was given, switches on the requested trace events and hands the rest
of the command line to the named command. Errors are reported through
the active output interface and turned into exit codes.
"""

import argparse
import importlib
import inspect
import sys
from typing import Any, Dict, List, Optional

from rfcombiner import tracing
from rfcombiner.lib import output
from rfcombiner.lib.exception import (
    InvalidArgumentError,
    RFCombinerError,
    TrialFailureThresholdError,
)
from rfcombiner.lib.settings import DEFAULT_SETTINGS, load_config, merged_settings
from rfcombiner.processor.command.base_cmd import GLOBAL_KEYS, CommandArgumentParser
from rfcombiner.version import __version__

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

HIGHLIGHT_CHOICES = ("light", "dark", "plain")
MODE_CHOICES = ("paper-compat", "free")

# Global options followed by a separate value word.
VALUE_OPTIONS = ("--config", "--outdir", "--trace", "--highlight", "--mode")


def resolve_name(obj, command_name: str) -> Optional[str]:
    """The command ``command_name`` names, following aliases; None if
    there is no such command."""
    name = command_name.lower()
    if name in obj.commands:
        return name
    return obj.aliases.get(command_name)


def parse_trace_events(text: Optional[str]) -> Dict[str, bool]:
    """``all`` or a comma-separated list of event names."""
    if not text:
        return {}
    names = [n.strip() for n in str(text).split(",") if n.strip()]
    if "all" in names:
        names = list(tracing.TraceEventNames)
    events = {}
    for name in names:
        try:
            events[tracing.event_from_name(name).name] = True
        except ValueError as e:
            raise InvalidArgumentError(str(e))
    return events


def make_global_parser() -> CommandArgumentParser:
    parser = CommandArgumentParser(
        prog="rfcombiner",
        description="Design analog combiners for RF-chain-reduced MIMO receivers "
        "and measure their channel-estimation error.",
        epilog='Type "rfcombiner help" for the list of commands.',
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="INI-style file of option defaults")
    parser.add_argument("--outdir", default=None, help="directory result files go into")
    parser.add_argument("--trace", default=None, help="trace events: all, or a comma-separated list")
    parser.add_argument("--highlight", choices=HIGHLIGHT_CHOICES, default=None)
    parser.add_argument("--mode", choices=MODE_CHOICES, default=None,
                        help="paper-compat (default) enforces the documented parameter ranges")
    return parser


def split_global_args(argv: List[str]):
    """Split ``argv`` into the global options and the command line
    that starts at the first word that is not an option or an option's
    value."""
    i = 0
    while i < len(argv):
        word = argv[i]
        if not word.startswith("-"):
            return argv[:i], argv[i:]
        if word in VALUE_OPTIONS:
            i += 1
        i += 1
    return argv, []


class CommandProcessor:
    """Holds the settings, the output interface stack and one instance
    of every command."""

    def __init__(self, settings: Optional[Dict[str, Any]] = None, intf=None):
        self.settings = merged_settings(settings)
        self.intf: List[output.OutputInterface] = output.intf
        # An interface pushed only for the duration of execute().
        self.own_intf = intf
        self.cmd_instances = self._populate_commands()
        self._populate_cmd_lists()
        return

    def _populate_commands(self) -> list:
        """Create an instance of each command. Commands are found by
        importing the modules listed in ``command.__modules__`` and
        instantiating every class whose name ends in ``Command``."""
        from rfcombiner.processor import command as Mcommand

        cmd_instances = []
        for mod_name in sorted(Mcommand.__modules__):
            command_mod = importlib.import_module(f"{Mcommand.__name__}.{mod_name}")
            classnames = [
                name
                for name, cls in inspect.getmembers(command_mod, inspect.isclass)
                if name.endswith("Command") and "CliCommand" != name and cls.__module__ == command_mod.__name__
            ]
            for classname in classnames:
                cmd_instances.append(getattr(command_mod, classname)(self))
                pass
            pass
        return cmd_instances

    def _populate_cmd_lists(self):
        """Populate self.commands, self.aliases and self.category"""
        self.commands = {}
        self.aliases = {}
        self.category = {}
        for cmd_instance in self.cmd_instances:
            cmd_name = cmd_instance.name
            self.commands[cmd_name] = cmd_instance
            for alias_name in cmd_instance.aliases:
                self.aliases[alias_name] = cmd_name
                pass
            self.category.setdefault(cmd_instance.category, []).append(cmd_name)
            pass
        for names in self.category.values():
            names.sort()
        return

    def msg(self, text: str):
        self.intf[-1].msg(text)

    def errmsg(self, text: str):
        self.intf[-1].errmsg(text)

    def apply_globals(self, options: argparse.Namespace) -> Dict[str, str]:
        """Fold the global options and config file into ``self.settings``
        and return the config values meant for the command."""
        config: Dict[str, str] = {}
        if options.config is not None:
            config = load_config(options.config)

        for key in GLOBAL_KEYS:
            if key == "config":
                continue
            value = getattr(options, key, None)
            if value is None:
                value = config.get(key)
            if value is None:
                continue
            if key == "width":
                try:
                    value = int(value)
                except ValueError:
                    raise InvalidArgumentError(f"width must be an integer; got {value!r}")
            elif key == "highlight" and value not in HIGHLIGHT_CHOICES:
                raise InvalidArgumentError(f"highlight must be one of {', '.join(HIGHLIGHT_CHOICES)}")
            elif key == "mode" and value not in MODE_CHOICES:
                raise InvalidArgumentError(f"mode must be one of {', '.join(MODE_CHOICES)}")
            self.settings[key] = value
            pass

        self.intf[-1].highlight = self.settings["highlight"]
        events = parse_trace_events(self.settings.get("trace"))
        if events:
            style = None if self.settings["highlight"] == "plain" else self.settings["style"]
            tracing.trace_activate(style=style, **events)
        return {key: value for key, value in config.items() if key not in GLOBAL_KEYS}

    def execute(self, argv: List[str]) -> int:
        """Run the command line ``argv`` (without the program name) and
        return the exit code."""
        if self.own_intf is not None:
            self.intf.append(self.own_intf)
        try:
            return self._execute(list(argv))
        finally:
            tracing.trace_deactivate()
            if self.own_intf is not None:
                self.intf.pop()

    def _execute(self, argv: List[str]) -> int:
        try:
            global_args, command_args = split_global_args(argv)
            options = make_global_parser().parse_args(global_args)
            config = self.apply_globals(options)
            if not command_args:
                return self.commands["help"].run(["help"])
            command_name = resolve_name(self, command_args[0])
            if command_name is None:
                self.errmsg(f'Undefined command: "{command_args[0]}". Try "help".')
                return EXIT_USAGE
            instance = self.commands[command_name]
            command_config = config if instance.uses_config else None
            return instance.run([command_name] + command_args[1:], command_config)
        except SystemExit as e:
            # -h and --version exit through argparse.
            return e.code if isinstance(e.code, int) else EXIT_OK
        except InvalidArgumentError as e:
            self.errmsg(str(e))
            return EXIT_USAGE
        except TrialFailureThresholdError as e:
            self.errmsg(str(e))
            return EXIT_FAILURE
        except RFCombinerError as e:
            self.errmsg(f"{e.__class__.__name__}: {e}")
            return EXIT_FAILURE

    pass


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    proc = CommandProcessor(DEFAULT_SETTINGS)
    return proc.execute(argv)


# Demo it
if __name__ == "__main__":
    cmdproc = CommandProcessor()
    print("commands:")
    print(sorted(cmdproc.commands.keys()))
    print("aliases:")
    print(sorted(cmdproc.aliases.keys()))
    print("categories:")
    print(cmdproc.category)
    pass
