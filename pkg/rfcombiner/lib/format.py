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

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pygments import highlight
from pygments.formatters import Terminal256Formatter
from pygments.lexer import RegexLexer, bygroups
from pygments.token import Name, Number, Operator, Text, Keyword


class TraceLexer(RegexLexer):
    """Lexer for ``event: key=value ...`` trace lines."""

    name = "RF-Combiner trace"
    aliases = ["rfcombiner-trace"]

    tokens = {
        "root": [
            (r"^([\w-]+)(:)", bygroups(Keyword, Operator)),
            (r"([\w-]+)(=)", bygroups(Name.Attribute, Operator)),
            (r"[-+]?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?", Number),
            (r"\s+", Text),
            (r"[^\s=]+", Text),
        ]
    }


trace_lexer = TraceLexer()


def pygments_format(text: str, style: Optional[str]) -> str:
    """Add terminal formatting to a trace line ``text``, using
    pygments style ``style``. A style of None means no formatting.
    """
    if style is None:
        return text
    terminal_formatter = Terminal256Formatter(style=style)
    return highlight(text, trace_lexer, terminal_formatter).rstrip("\n")


def format_value(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.6g}"
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], float):
        return "[" + ", ".join(f"{v:.6g}" for v in value) + "]"
    return str(value)


def format_fields(event_name: str, fields: Dict[str, Any]) -> str:
    """``design: method=psoac n_rf=4 ...``"""
    parts = [f"{key}={format_value(value)}" for key, value in fields.items()]
    return f"{event_name}: " + " ".join(parts)


def format_complex(z: complex) -> str:
    """``re,im`` with enough digits to round-trip a double."""
    return f"{z.real:.17g},{z.imag:.17g}"


def format_matrix_rows(m: np.ndarray) -> List[str]:
    """One string per matrix row; entries are whitespace-separated
    ``re,im`` pairs."""
    return [" ".join(format_complex(complex(z)) for z in row) for row in np.atleast_2d(m)]


def parse_matrix_rows(lines: Sequence[str]) -> np.ndarray:
    """Inverse of ``format_matrix_rows``; ``#`` lines are skipped."""
    rows = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for pair in line.split():
            re_str, im_str = pair.split(",")
            row.append(complex(float(re_str), float(im_str)))
        rows.append(row)
    return np.array(rows, dtype=complex)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Left-aligned plain text table."""
    cells = [[str(h) for h in headers]] + [[format_value(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines)
