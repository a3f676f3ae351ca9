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

import pandas as pd


@dataclasses.dataclass(frozen=True)
class MetricReport:
    """External clustering metrics over the evaluated rows."""

    ari: float
    nmi: float
    ami: float
    fowlkes_mallows: float
    pairwise_f: float
    n_eval: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True, eq=False)
class RankTable:
    """Per-dataset ranking of algorithms by mean score over trials.

    ``cells`` has one row per (dataset, algorithm) with the columns
    ``mean``, ``half_width``, ``rank``, ``significant_vs_next`` and
    ``significant_vs_all_lower``. ``pairwise`` has one row per ordered
    (better, worse) pair of a dataset with a ``significant`` flag.
    """

    metric: str
    alpha: float
    trials: int
    cells: pd.DataFrame
    pairwise: pd.DataFrame

    @property
    def datasets(self) -> list[str]:
        return sorted(self.cells["dataset"].unique())

    @property
    def algorithms(self) -> list[str]:
        return sorted(self.cells["algorithm"].unique())

    def ranks(self) -> pd.DataFrame:
        """Dataset x algorithm matrix of ranks."""
        return self.cells.pivot(
            index="dataset", columns="algorithm", values="rank"
        )

    def to_frame(self) -> pd.DataFrame:
        return self.cells.assign(metric=self.metric, alpha=self.alpha)
