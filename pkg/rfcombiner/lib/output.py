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
"""Terminal output interface.

Commands and trace hooks never call ``print`` directly; they go through
the interface on top of the ``intf`` stack, so tests (or a front end)
can push their own interface and capture everything.
"""

import sys
from typing import List, TextIO

from pygments.console import colorize


class OutputInterface:
    """Writes messages to a pair of text streams."""

    def __init__(self, out: TextIO = None, err: TextIO = None, highlight: str = "light"):
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr
        self.highlight = highlight
        return

    def msg(self, msg: str):
        self.out.write(msg + "\n")
        return

    def msg_nocr(self, msg: str):
        self.out.write(msg)
        return

    def errmsg(self, msg: str):
        if "plain" != self.highlight:
            msg = colorize("red", msg)
        self.err.write(f"** {msg}\n")
        return

    def section(self, message: str):
        if "plain" != self.highlight:
            message = colorize("bold", message)
        else:
            message += "\n" + "-" * len(message)
            pass
        self.msg(message)

    pass


class CaptureInterface(OutputInterface):
    """Keeps messages in lists instead of writing them."""

    def __init__(self):
        super().__init__(highlight="plain")
        self.msgs: List[str] = []
        self.errmsgs: List[str] = []

    def msg(self, msg: str):
        self.msgs.append(msg)

    def msg_nocr(self, msg: str):
        self.msgs.append(msg)

    def errmsg(self, msg: str):
        self.errmsgs.append(msg)

    pass


# The active interface is the last one.
intf: List[OutputInterface] = [OutputInterface()]


def msg(text: str):
    intf[-1].msg(text)


def errmsg(text: str):
    intf[-1].errmsg(text)


def section(text: str):
    intf[-1].section(text)
