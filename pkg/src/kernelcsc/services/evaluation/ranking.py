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
"""Cross-dataset ranking of algorithms by mean score.

Ranks use the minimum rank for ties. Two algorithms differ
significantly when their normal confidence intervals
``mean +- z_{1-alpha/2} sd / sqrt(trials)`` do not overlap.
"""
import logging
import typing as tp

import numpy as np
import pandas as pd
from scipy.stats import norm, rankdata

from kernelcsc.core.models import RankTable
from kernelcsc.services.evaluation.exceptions import (
    EvaluationError,
    TooFewTrialsError,
    UnbalancedTrialsError,
)

LOGGER = logging.getLogger(__name__)

SCORE_COLUMNS = ("dataset", "algorithm", "trial", "value")


def rank_algorithms(
    scores: pd.DataFrame, alpha: float = 0.05, metric: str = "ari"
) -> RankTable:
    """Rank algorithms per dataset from a long table of trial scores.

    ``scores`` has one row per (dataset, algorithm, trial) with the
    score in ``value``.
    """
    missing = set(SCORE_COLUMNS) - set(scores.columns)
    if missing:
        raise EvaluationError(f"Score table lacks columns {sorted(missing)}")

    grouped = scores.groupby(["dataset", "algorithm"], sort=True)["value"]
    counts = grouped.size()
    if counts.nunique() != 1:
        raise UnbalancedTrialsError(
            "Every (dataset, algorithm) cell needs the same number of "
            f"trials, got {sorted(counts.unique().tolist())}"
        )
    trials = int(counts.iloc[0])
    if trials < 2:
        raise TooFewTrialsError(
            f"Confidence intervals need at least 2 trials, got {trials}"
        )

    z = float(norm.ppf(1.0 - alpha / 2.0))
    cells = grouped.agg(mean="mean", sd=lambda v: v.std(ddof=1))
    cells = cells.reset_index()
    cells["half_width"] = z * cells["sd"] / np.sqrt(trials)
    cells["rank"] = 0
    cells["significant_vs_next"] = False
    cells["significant_vs_all_lower"] = False

    pairwise = []
    for dataset, frame in cells.groupby("dataset", sort=True):
        ranks = rankdata(-frame["mean"].to_numpy(), method="min")
        cells.loc[frame.index, "rank"] = ranks.astype(int)
        lower = frame["mean"] - frame["half_width"]
        upper = frame["mean"] + frame["half_width"]
        for a, rank_a in zip(frame.index, ranks):
            worse = [
                (b, rank_b)
                for b, rank_b in zip(frame.index, ranks)
                if rank_b > rank_a
            ]
            separated = {b: bool(lower[a] > upper[b]) for b, _ in worse}
            for b, _ in worse:
                pairwise.append(
                    {
                        "dataset": dataset,
                        "better": cells.at[a, "algorithm"],
                        "worse": cells.at[b, "algorithm"],
                        "significant": separated[b],
                    }
                )
            if worse:
                next_rank = min(rank_b for _, rank_b in worse)
                cells.at[a, "significant_vs_next"] = all(
                    separated[b] for b, rank_b in worse if rank_b == next_rank
                )
                cells.at[a, "significant_vs_all_lower"] = all(
                    separated.values()
                )

    cells["rank"] = cells["rank"].astype(int)
    pairwise = pd.DataFrame(
        pairwise, columns=["dataset", "better", "worse", "significant"]
    )
    return RankTable(
        metric=metric,
        alpha=alpha,
        trials=trials,
        cells=cells,
        pairwise=pairwise,
    )


def first_place_summary(tables: tp.Iterable[RankTable]) -> pd.DataFrame:
    """Share of datasets each algorithm ranks first or in the top two.

    ``first_significant`` is the share of the first places that are
    significant against every lower ranked algorithm.
    """
    rows = []
    for table in tables:
        cells = table.cells
        n_datasets = cells["dataset"].nunique()
        for algorithm, frame in cells.groupby("algorithm", sort=True):
            first = frame["rank"] == 1
            n_first = int(first.sum())
            n_top2 = int((frame["rank"] <= 2).sum())
            n_significant = int(
                frame.loc[first, "significant_vs_all_lower"].sum()
            )
            rows.append(
                {
                    "metric": table.metric,
                    "algorithm": algorithm,
                    "first_pct": 100.0 * n_first / n_datasets,
                    "top2_pct": 100.0 * n_top2 / n_datasets,
                    "first_significant_pct": (
                        100.0 * n_significant / n_first if n_first else 0.0
                    ),
                }
            )
    return pd.DataFrame(
        rows,
        columns=[
            "metric",
            "algorithm",
            "first_pct",
            "top2_pct",
            "first_significant_pct",
        ],
    )


def first_place_by_budget(
    scores: pd.DataFrame, alpha: float = 0.05, metric: str = "ari"
) -> pd.DataFrame:
    """First-place share per algorithm for each constraint budget.

    ``scores`` carries a ``budget`` column next to the score columns.
    """
    rows = []
    for budget, frame in scores.groupby("budget", sort=True):
        table = rank_algorithms(frame, alpha, metric)
        summary = first_place_summary([table])
        for record in summary.to_dict("records"):
            rows.append(
                {
                    "budget": int(budget),
                    "algorithm": record["algorithm"],
                    "first_pct": record["first_pct"],
                }
            )
    LOGGER.debug("Computed first places for %d budgets", len(rows))
    return pd.DataFrame(rows, columns=["budget", "algorithm", "first_pct"])
