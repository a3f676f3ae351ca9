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
"""Benchmark: every method on every dataset, trial and pair budget."""
import itertools
import logging
import pathlib
import typing as tp

import pandas as pd
from joblib import Parallel, delayed

from kernelcsc.core.enums import BenchMethod, Stage
from kernelcsc.core.models import BenchConfig, DataMatrix, ExperimentConfig
from kernelcsc.services.evaluation.ranking import (
    SCORE_COLUMNS,
    first_place_by_budget,
    first_place_summary,
    rank_algorithms,
)
from kernelcsc.tasks.artifacts import write_csv, write_json
from kernelcsc.tasks.experiment import load_data, run_trial, stage

logger = logging.getLogger(__name__)


def _run_cell(
    data: DataMatrix,
    config: ExperimentConfig,
    trial: int,
    methods: tp.Sequence[BenchMethod],
) -> list[dict]:
    return [
        outcome.record()
        for outcome in run_trial(data, config, trial, methods)
    ]


def _metric_frame(scores: pd.DataFrame, metric: str) -> pd.DataFrame:
    frame = scores.rename(columns={"method": "algorithm", metric: "value"})
    return frame[[*SCORE_COLUMNS, "budget"]]


def run_bench(config: BenchConfig) -> pd.DataFrame:
    """Run the (dataset x method x trial) matrix and write rank tables.

    Methods of one (dataset, trial) cell share the split and the
    constraints. Results are sorted before writing, so the output does
    not depend on worker scheduling. With several pair budgets, rank
    tables use the largest budget and ``evolution.csv`` covers all.
    """
    config_hash = config.config_hash()
    meta = {"config_hash": config_hash, "seed": config.seed}
    out = pathlib.Path(config.out)
    with stage(Stage.WRITE):
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "config.json", config.to_payload())

    datasets = [
        (spec, load_data(spec, config.seed)) for spec in config.datasets
    ]
    budgets = sorted(config.pair_budgets or [config.split.max_pairs])
    cells = list(
        itertools.product(datasets, budgets, range(config.trials))
    )
    logger.info(
        f"Task started: bench of {len(datasets)} dataset(s), "
        f"{len(config.methods)} method(s), {config.trials} trial(s), "
        f"{len(budgets)} budget(s) on {config.workers} worker(s)"
    )
    results = Parallel(n_jobs=config.workers)(
        delayed(_run_cell)(
            data,
            config.experiment(spec, max_pairs=budget),
            trial,
            config.methods,
        )
        for (spec, data), budget, trial in cells
    )
    records = sorted(
        itertools.chain.from_iterable(results),
        key=lambda r: (r["dataset"], r["method"], r["budget"], r["trial"]),
    )
    scores = pd.DataFrame(records)

    with stage(Stage.SCORE):
        main = scores[scores["budget"] == budgets[-1]]
        tables = [
            rank_algorithms(
                _metric_frame(main, str(metric)), config.alpha, str(metric)
            )
            for metric in config.metrics
        ]
        summary = first_place_summary(tables)
        evolution = None
        if config.pair_budgets:
            evolution = pd.concat(
                [
                    first_place_by_budget(
                        _metric_frame(scores, str(metric)),
                        config.alpha,
                        str(metric),
                    ).assign(metric=str(metric))
                    for metric in config.metrics
                ],
                ignore_index=True,
            )

    with stage(Stage.WRITE):
        # per-trial seeds stay in the score rows
        write_csv(scores, out / "scores.csv", {"config_hash": config_hash})
        for table in tables:
            write_csv(
                table.ranks().reset_index(),
                out / f"rank-{table.metric}.csv",
                meta,
            )
            write_csv(
                table.to_frame(), out / f"rank-{table.metric}-cells.csv", meta
            )
            write_csv(
                table.pairwise, out / f"pairwise-{table.metric}.csv", meta
            )
        write_csv(summary, out / "first-place.csv", meta)
        if evolution is not None:
            write_csv(evolution, out / "evolution.csv", meta)

    logger.info(
        f"Task complete: bench of {len(records)} runs, artifacts in {out}"
    )
    return scores
