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
from __future__ import annotations

import dataclasses
import typing as tp

import numpy as np

from kernelcsc.core.types import BoolArray, FloatArray, IntArray
from kernelcsc.services.dataio.exceptions import InvalidDataError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True, eq=False)
class DataMatrix:
    """An ``n x d`` feature matrix with optional labels and train mask."""

    values: FloatArray
    labels: tp.Optional[IntArray] = None
    train_mask: tp.Optional[BoolArray] = None
    name: str = ""
    columns: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise InvalidDataError(
                f"Data must be a 2-d matrix, got shape {values.shape}"
            )
        n, d = values.shape
        if n < 2 or d < 1:
            raise InvalidDataError(
                f"Data needs at least 2 rows and 1 column, got {n}x{d}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidDataError("Data contains non-finite values")
        object.__setattr__(self, "values", _frozen(values))

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (n,):
                raise InvalidDataError(
                    f"Expected {n} labels, got {labels.shape[0]}"
                )
            object.__setattr__(self, "labels", _frozen(labels))

        if self.train_mask is not None:
            mask = np.asarray(self.train_mask, dtype=bool)
            if mask.shape != (n,):
                raise InvalidDataError(
                    f"Expected a train mask of length {n}, "
                    f"got {mask.shape[0]}"
                )
            object.__setattr__(self, "train_mask", _frozen(mask))

        if self.columns and len(self.columns) != d:
            raise InvalidDataError(
                f"Expected {d} column names, got {len(self.columns)}"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def train_indices(self) -> IntArray:
        if self.train_mask is None:
            return np.arange(0, dtype=np.int64)
        return np.flatnonzero(self.train_mask).astype(np.int64)

    @property
    def test_mask(self) -> tp.Optional[BoolArray]:
        if self.train_mask is None:
            return None
        return ~self.train_mask

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            return 0
        return int(np.unique(self.labels).size)

    def with_train_mask(self, mask: BoolArray) -> DataMatrix:
        return dataclasses.replace(self, train_mask=mask)

    def subset(self, rows: IntArray) -> DataMatrix:
        """Return the rows ``rows`` (in that order) as a new matrix."""
        rows = np.asarray(rows, dtype=np.int64)
        return DataMatrix(
            values=self.values[rows],
            labels=None if self.labels is None else self.labels[rows],
            train_mask=(
                None if self.train_mask is None else self.train_mask[rows]
            ),
            name=self.name,
            columns=self.columns,
        )
