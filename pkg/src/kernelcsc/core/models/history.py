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
import pandas as pd

from kernelcsc.core.types import FloatArray


@dataclasses.dataclass(frozen=True, eq=False)
class HistoryEntry:
    params: FloatArray
    reward: float

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HistoryEntry):
            return NotImplemented
        return self.reward == other.reward and np.array_equal(
            self.params, other.params
        )

    __hash__ = None


@dataclasses.dataclass(eq=False)
class History:
    """Evaluated candidates in order; the earliest maximum is the best."""

    entries: list[HistoryEntry] = dataclasses.field(default_factory=list)
    best_index: int = -1

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> tp.Iterator[HistoryEntry]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, History):
            return NotImplemented
        return (
            self.best_index == other.best_index
            and self.entries == other.entries
        )

    def append(self, params: np.ndarray, reward: float) -> bool:
        """Record a candidate; return True when it is a new best."""
        params = np.array(params, dtype=np.float64, copy=True)
        params.setflags(write=False)
        self.entries.append(HistoryEntry(params, float(reward)))
        if self.best_index < 0 or reward > self.best.reward:
            self.best_index = len(self.entries) - 1
            return True
        return False

    @property
    def best(self) -> HistoryEntry:
        return self.entries[self.best_index]

    @property
    def rewards(self) -> FloatArray:
        return np.array([e.reward for e in self.entries], dtype=np.float64)

    @property
    def params(self) -> FloatArray:
        return np.vstack([e.params for e in self.entries])

    def best_so_far(self) -> FloatArray:
        return np.maximum.accumulate(self.rewards)

    def to_frame(self) -> pd.DataFrame:
        """One row per iteration: reward, support and active values."""
        rows = []
        for it, entry in enumerate(self.entries):
            support = np.flatnonzero(entry.params)
            rows.append(
                {
                    "iter": it,
                    "reward": entry.reward,
                    "beta_support": " ".join(str(i) for i in support),
                    "beta_values": " ".join(
                        repr(float(v)) for v in entry.params[support]
                    ),
                }
            )
        return pd.DataFrame(
            rows, columns=["iter", "reward", "beta_support", "beta_values"]
        )
