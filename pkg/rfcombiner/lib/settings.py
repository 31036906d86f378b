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
"""Default settings, environment overrides and config files.

Precedence, highest first: command-line flags, config-file values,
environment variables, ``DEFAULT_SETTINGS``.
"""

import configparser
import os
from typing import Any, Dict, Optional

from rfcombiner.lib.exception import InvalidArgumentError

# If RFCOMBINER_PYGMENTS_STYLE has been set, use that as the default.
pygments_style_from_environment = os.environ.get("RFCOMBINER_PYGMENTS_STYLE", None)

DEFAULT_SETTINGS: Dict[str, Any] = {
    "highlight": "light",  # or "dark" or "plain"
    "style": pygments_style_from_environment or "tango",
    "width": 80,
    "outdir": os.environ.get("RFCOMBINER_OUTDIR", "."),
    "plots": True,
    "progress": True,
    "mode": "paper-compat",  # or "free"
}

CONFIG_SECTION = "sweep"


def option_set(options: Optional[Dict[str, Any]], key: str, default_options: Dict[str, Any]) -> Any:
    """Return ``options[key]`` if it is there and not None, else the
    default for ``key``."""
    if not options or options.get(key) is None:
        return default_options.get(key)
    return options[key]


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def load_config(path: str) -> Dict[str, str]:
    """Read a key-value config file.

    The file is INI-style. Keys may live in a ``[sweep]`` section or,
    for short files, before any section header. Keys are the long flag
    names, with dashes or underscores: ``n-bs = 8``, ``snr = 0:5:30``.
    """
    if not os.path.isfile(path):
        raise InvalidArgumentError(f"config file {path!r} not found")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    parser = configparser.ConfigParser(interpolation=None)
    stripped = text.lstrip()
    if not stripped.startswith("["):
        text = f"[{CONFIG_SECTION}]\n" + text
    try:
        parser.read_string(text, source=path)
    except configparser.Error as e:
        raise InvalidArgumentError(f"cannot parse config file {path!r}: {e}")

    values: Dict[str, str] = {}
    for section in parser.sections():
        if section not in (CONFIG_SECTION, "global"):
            raise InvalidArgumentError(
                f"unknown section [{section}] in {path!r}; use [{CONFIG_SECTION}] or [global]"
            )
        for key, value in parser.items(section):
            values[normalize_key(key)] = value.strip()
    return values


def merged_settings(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """A fresh copy of the defaults with ``overrides`` applied."""
    settings = DEFAULT_SETTINGS.copy()
    for key in settings:
        settings[key] = option_set(overrides, key, DEFAULT_SETTINGS)
    return settings
