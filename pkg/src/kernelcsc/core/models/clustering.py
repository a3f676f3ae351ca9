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

from kernelcsc.core.types import IntArray
from kernelcsc.services.cluster.exceptions import InvalidSeedsError


@dataclasses.dataclass(frozen=True, eq=False)
class Partition:
    """Cluster labels over ``{0, ..., k-1}`` and the achieved objective.

    ``trace`` records the objective after initialization and after
    every iteration (or sweep), so monotonicity can be checked.
    """

    labels: IntArray
    k: int
    objective: float = 0.0
    iterations: int = 0
    trace: tuple[float, ...] = ()

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        if labels.ndim != 1:
            raise ValueError("Labels must be a vector")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"Labels must lie in [0, {self.k - 1}]")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "trace", tuple(float(t) for t in self.trace))

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> IntArray:
        return np.bincount(self.labels, minlength=self.k).astype(np.int64)


@dataclasses.dataclass(frozen=True)
class SeedSet:
    """Disjoint, non-empty index sets used as initial pseudo-centroids."""

    centers: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        centers = tuple(
            tuple(sorted(int(i) for i in center)) for center in self.centers
        )
        seen: set[int] = set()
        for center in centers:
            if not center:
                raise InvalidSeedsError("Seed sets must be non-empty")
            if min(center) < 0:
                raise InvalidSeedsError("Seed indices must be non-negative")
            overlap = seen.intersection(center)
            if overlap:
                raise InvalidSeedsError(
                    f"Seed sets overlap on index {min(overlap)}"
                )
            seen.update(center)
        object.__setattr__(self, "centers", centers)

    def __len__(self) -> int:
        return len(self.centers)

    def __iter__(self) -> tp.Iterator[tuple[int, ...]]:
        return iter(self.centers)

    def check(self, n: int) -> None:
        for center in self.centers:
            if max(center) >= n:
                raise InvalidSeedsError(
                    f"Seed index {max(center)} is out of range for n={n}"
                )

    def as_arrays(self) -> list[IntArray]:
        return [np.array(c, dtype=np.int64) for c in self.centers]
