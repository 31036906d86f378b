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

from typing import Optional


class RFCombinerError(Exception):
    """Base class for all errors raised by this package"""

    pass


class InvalidArgumentError(RFCombinerError, ValueError):
    """A size, range, or parameter value is outside what an operation
    accepts."""

    pass


class DimensionMismatchError(InvalidArgumentError):
    """Operand shapes do not agree"""

    pass


class SingularModelError(RFCombinerError):
    """The observation Gram matrix is too ill-conditioned to solve.

    ``kind`` names the feasible set of the combiner that produced it and
    ``combiner`` holds the matrix itself, so a caller can report which
    design was at fault.
    """

    def __init__(self, message: str, kind: Optional[str] = None, combiner=None,
                 condition: Optional[float] = None):
        super().__init__(message)
        self.kind = kind
        self.combiner = combiner
        self.condition = condition


class DegenerateTrialError(RFCombinerError):
    """A channel realization with zero norm was seen; its normalized
    error is undefined."""

    pass


class TrialFailureThresholdError(RFCombinerError):
    """Too many Monte-Carlo trials of a sweep raised errors"""

    def __init__(self, failed: int, total: int, threshold: float):
        super().__init__(
            f"{failed} of {total} trials failed; "
            f"more than the allowed fraction {threshold:g}"
        )
        self.failed = failed
        self.total = total
        self.threshold = threshold
