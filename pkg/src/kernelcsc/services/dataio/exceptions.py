#  Copyright 2026 kernelcsc contributors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
"""Exceptions for the data input/output module."""


class DataIOError(Exception):
    """Base class for exceptions in this module."""


class DatasetNotFoundError(DataIOError):
    """Raised when a dataset file does not exist."""


class DatasetParseError(DataIOError):
    """Raised when a dataset cell cannot be parsed as a number."""

    def __init__(self, message: str, row: int = None, column: str = None):
        self.row = row
        self.column = column
        super().__init__(message)


class LabelColumnError(DataIOError):
    """Raised when the configured label column is missing."""


class InvalidDataError(DataIOError):
    """Raised when a data matrix violates its invariants."""


class InvalidConstraintError(DataIOError):
    """Raised when a constraint set violates its invariants."""


class ConstraintFileError(InvalidConstraintError):
    """Raised when a constraint file cannot be parsed."""


class InconsistentConstraintsError(InvalidConstraintError):
    """Raised when a must-link path connects a cannot-link pair."""

    def __init__(self, pair: tuple[int, int]):
        self.pair = pair
        super().__init__(
            f"Cannot-link pair {pair} is connected by must-link constraints"
        )


class StratificationError(DataIOError):
    """Raised when a stratified split cannot be drawn."""


class ConstraintSamplingError(DataIOError):
    """Raised when too few training points exist to sample pairs."""
