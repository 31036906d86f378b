#  Copyright (C) 2025 The RF-Combiner Team
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
"""One module per command. cmdproc.py imports every module listed in
``__modules__`` and instantiates the classes ending in ``Command``."""

import glob
import os.path as osp

__command_dir__ = osp.dirname(__file__)

# All *.py files except __init__.py.
__py_files__ = glob.glob(osp.join(__command_dir__, "[a-z]*.py"))

# Modules here that hold no command.
exclude_files = ["base_cmd.py"]

__modules__ = sorted(
    osp.basename(filename[0:-3])
    for filename in __py_files__
    if osp.basename(filename) not in exclude_files
)

__all__ = __modules__ + ["base_cmd"]
