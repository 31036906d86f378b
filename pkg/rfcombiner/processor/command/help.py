# -*- coding: utf-8 -*-
#
#    Copyright (C) 2025 The RF-Combiner Team
#
#    This program is free software: you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation, either version 3 of the License, or
#    (at your option) any later version.
#
#    This program is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    along with this program.  If not, see <http://www.gnu.org/licenses/>.
import re

from rfcombiner.processor import cmdproc as Mcmdproc
from rfcombiner.processor.command.base_cmd import CliCommand

categories = {
    "experiments": "Designing combiners and running Monte-Carlo sweeps",
    "support": "Support facilities",
}


class HelpCommand(CliCommand):
    """**help** [*command* | *category* | **\\***]

    Without argument, print the list of command categories.

    With a category name, list the commands in that category together
    with a one-line description. With `*`, list every command.

    With a command name, print the command's documentation followed by
    its option summary. A prefix of a command name is accepted when it
    matches exactly one command.

    See also:
    ---------

    `validate`"""

    aliases = ("?",)
    short_help = "Print commands or give help for command(s)"

    CliCommand.setup(locals(), category="support")

    def run(self, args, config=None) -> int:
        if len(args) > 1:
            cmd_name = args[1]
            if cmd_name == "*":
                self.section("List of all commands:")
                self.msg_nocr(self.columnize_commands(list(self.proc.commands.keys())))
                return 0
            elif cmd_name in categories:
                self.show_category(cmd_name, args[2:])
                return 0

            command_name = Mcmdproc.resolve_name(self.proc, cmd_name)
            if command_name:
                self.show_command(command_name)
                return 0

            cmds = [cmd for cmd in self.proc.commands if re.match("^" + re.escape(cmd_name), cmd)]
            if not cmds:
                self.errmsg(f"No commands found matching /^{cmd_name}/. Try \"help\".")
                return 2
            elif len(cmds) == 1:
                self.msg(f"Pattern '{cmd_name}' matches command {cmds[0]}...")
                self.show_command(cmds[0])
            else:
                self.section(f"Command names matching /^{cmd_name}/:")
                self.msg_nocr(self.columnize_commands(cmds))
                pass
            return 0

        self.list_categories()
        return 0

    def show_command(self, command_name: str):
        instance = self.proc.commands[command_name]
        doc = (instance.__doc__ or "").rstrip("\n")
        self.msg(strip_indent(doc))
        parser = instance.make_parser()
        if parser is not None:
            self.msg("")
            self.msg(parser.format_help().rstrip("\n"))
        aliases = [key for key in self.proc.aliases if command_name == self.proc.aliases[key]]
        if aliases:
            self.msg("")
            self.msg("Aliases: " + ", ".join(aliases) + ".")
            pass
        return

    def list_categories(self):
        """List the command categories and a short description of each."""
        self.section("Classes of commands:")
        for cat in sorted(categories):
            self.msg("  %-13s -- %s" % (cat, categories[cat]))
            pass
        self.msg(
            """
Type `help` followed by a class name for a list of commands in that class.
Type `help *` for the list of all commands.
Type `help` followed by command name for full documentation."""
        )
        return

    def show_category(self, category, args):
        """Show short help for all commands in `category'."""
        n2cmd = self.proc.commands
        names = sorted(n2cmd.keys())
        if len(args) == 1 and args[0] == "*":
            self.section("Commands in class %s:" % category)
            cmds = [cmd for cmd in names if category == n2cmd[cmd].category]
            self.msg_nocr(self.columnize_commands(cmds))
            return

        self.msg("%s.\n" % categories[category])
        self.section("List of commands:")
        for name in names:
            if category != n2cmd[name].category:
                continue
            self.msg("%-13s -- %s" % (name, n2cmd[name].short_help))
            pass
        return

    pass


def strip_indent(doc: str) -> str:
    """Remove the indentation docstrings carry after their first line."""
    lines = doc.split("\n")
    body = [line for line in lines[1:] if line.strip()]
    indent = min((len(line) - len(line.lstrip()) for line in body), default=0)
    return "\n".join([lines[0]] + [line[indent:] for line in lines[1:]])


if __name__ == "__main__":
    # Demo it.
    proc = Mcmdproc.CommandProcessor()
    command = HelpCommand(proc)
    print("-" * 20)
    command.run(["help"])
    print("-" * 20)
    command.run(["help", "*"])
    print("-" * 20)
    command.run(["help", "design"])
    print("-" * 20)
    command.run(["help", "experiments", "*"])
    pass
