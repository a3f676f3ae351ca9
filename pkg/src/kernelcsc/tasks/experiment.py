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
"""Experiment trials: split, constraints, kernels, search, scoring."""
import contextlib
import dataclasses
import logging
import pathlib
import typing as tp

import numpy as np
import pandas as pd
from sklearn.cluster import KMeans
from sklearn.preprocessing import StandardScaler

from kernelcsc.core.enums import BenchMethod, FinalStep, SearchStrategy, Stage
from kernelcsc.core.exceptions import StageError
from kernelcsc.core.models import (
    BetaVector,
    ConstraintSet,
    DataMatrix,
    DatasetSpec,
    ExperimentConfig,
    KernelBank,
    MetricReport,
    Partition,
)
from kernelcsc.core.utils.hashing import trial_seed
from kernelcsc.services.cluster.constrained import (
    constrained_kmeans_in_space,
)
from kernelcsc.services.cluster.exceptions import ClusterError
from kernelcsc.services.cluster.factory import combined_space
from kernelcsc.services.cluster.mahalanobis import project
from kernelcsc.services.cluster.output import save_partition
from kernelcsc.services.cluster.space import ClusterSpace, FeatureSpace
from kernelcsc.services.dataio.constraints import augment_constraints
from kernelcsc.services.dataio.exceptions import DataIOError
from kernelcsc.services.dataio.files import (
    load_constraints,
    load_dataset,
    write_constraints,
)
from kernelcsc.services.dataio.splits import (
    sample_constraints,
    stratified_split,
)
from kernelcsc.services.dataio.synthetic import make_suite
from kernelcsc.services.evaluation.exceptions import EvaluationError
from kernelcsc.services.evaluation.metrics import score
from kernelcsc.services.kernels.bank import build_bank
from kernelcsc.services.kernels.exceptions import KernelError
from kernelcsc.services.kernels.nystrom import build_feature_maps
from kernelcsc.services.kernels.support import bank_for_descriptors
from kernelcsc.services.optimizer.csc import (
    CSCResult,
    export_best_model,
    learn_on_subsample,
    run_csc,
    run_mahalanobis_csc,
    select_single_kernel,
)
from kernelcsc.services.optimizer.exceptions import OptimizerError
from kernelcsc.tasks.artifacts import trial_dir, write_csv, write_json

logger = logging.getLogger(__name__)

_SERVICE_ERRORS = (
    DataIOError,
    KernelError,
    ClusterError,
    OptimizerError,
    EvaluationError,
    OSError,
    ValueError,
)


@contextlib.contextmanager
def stage(name: Stage):
    """Re-raise service errors as a StageError naming ``name``."""
    try:
        yield
    except StageError:
        raise
    except _SERVICE_ERRORS as e:
        raise StageError(name, e) from e


@dataclasses.dataclass
class TrialInputs:
    data: DataMatrix
    constraints: ConstraintSet
    augmented: ConstraintSet
    k: int
    seed: int
    trial: int


@dataclasses.dataclass
class TrialOutcome:
    dataset: str
    method: str
    trial: int
    seed: int
    budget: int
    n_constraints: int
    partition: Partition
    report: MetricReport
    result: tp.Optional[CSCResult] = None
    constraints: tp.Optional[ConstraintSet] = None

    def record(self) -> dict:
        return {
            "dataset": self.dataset,
            "method": self.method,
            "trial": self.trial,
            "seed": self.seed,
            "budget": self.budget,
            "n_constraints": self.n_constraints,
            "reward": None if self.result is None else self.result.reward,
            **self.report.to_dict(),
        }


def load_data(spec: DatasetSpec, seed: int = 0) -> DataMatrix:
    with stage(Stage.LOAD):
        if spec.suite is not None:
            data = make_suite(spec.suite, spec.n, seed)
            return dataclasses.replace(data, name=spec.label)
        return load_dataset(spec.path, spec.label_column, spec.label)


def cluster_count(spec: DatasetSpec, data: DataMatrix) -> int:
    return spec.k if spec.k is not None else data.n_classes


def prepare_trial(
    data: DataMatrix, config: ExperimentConfig, trial: int
) -> TrialInputs:
    """Split rows and sample constraints with the trial's shared seed."""
    seed = trial_seed(config.seed, config.dataset.label, trial)
    split = config.split.copy(update={"seed": seed})
    k = cluster_count(config.dataset, data)
    if config.constraints is not None:
        with stage(Stage.CONSTRAINTS):
            constraints = load_constraints(config.constraints, data.n)
            train = np.zeros(data.n, dtype=bool)
            train[constraints.indices()] = True
            data = data.with_train_mask(train)
            augmented = augment_constraints(constraints, data.n)
    else:
        with stage(Stage.SPLIT):
            data = stratified_split(data, split, k)
        with stage(Stage.CONSTRAINTS):
            constraints = sample_constraints(data, split)
            augmented = augment_constraints(constraints, data.n)
    return TrialInputs(
        data=data,
        constraints=constraints,
        augmented=augmented,
        k=k,
        seed=seed,
        trial=trial,
    )


def build_kernels(
    data: DataMatrix, config: ExperimentConfig, seed: int
) -> KernelBank:
    if config.approximation.enabled:
        return build_feature_maps(
            data, config.bank, config.approximation.rank, seed
        )
    return build_bank(data, config.bank, seed)


class _TrialRunner:
    """Runs the methods of one trial, sharing the kernel bank."""

    def __init__(self, inputs: TrialInputs, config: ExperimentConfig):
        self.inputs = inputs
        self.config = config
        self.optimizer = config.optimizer.copy(update={"seed": inputs.seed})
        self._bank: tp.Optional[KernelBank] = None

    @property
    def bank(self) -> KernelBank:
        if self._bank is None:
            with stage(Stage.BANK):
                self._bank = build_kernels(
                    self.inputs.data, self.config, self.inputs.seed
                )
        return self._bank

    def _subsampled(self) -> bool:
        size = self.optimizer.learn_subsample
        return size is not None and size < self.inputs.data.n

    def kernel_csc(self, strategy: SearchStrategy) -> CSCResult:
        inputs = self.inputs
        with stage(Stage.OPTIMIZE):
            if self._subsampled():
                return learn_on_subsample(
                    inputs.data,
                    inputs.augmented,
                    inputs.k,
                    self.optimizer,
                    strategy,
                    lambda d: build_kernels(d, self.config, inputs.seed),
                    self.config.approximation.rank,
                )
            return run_csc(
                self.bank, inputs.augmented, inputs.k, self.optimizer, strategy
            )

    def bank_space(self, result: CSCResult) -> ClusterSpace:
        return combined_space(self.bank, result.beta)

    def kernel_space(self, result: CSCResult) -> ClusterSpace:
        if not self._subsampled():
            return self.bank_space(result)
        support_bank = bank_for_descriptors(
            self.inputs.data,
            result.support_descriptors,
            self.config.approximation.rank,
            self.optimizer.seed,
            result.beta.support,
        )
        weights = BetaVector(result.beta.weights[result.beta.support])
        return combined_space(support_bank, weights)

    def finalize(self, result: CSCResult, space_of) -> Partition:
        if self.config.final != FinalStep.CONSTRAINED:
            return result.partition
        with stage(Stage.FINALIZE):
            return constrained_kmeans_in_space(
                space_of(result),
                self.inputs.augmented,
                result.seeds,
                self.inputs.k,
                self.optimizer.kmeans_max_iter,
                self.inputs.seed,
            )

    def plain_kmeans(self) -> Partition:
        with stage(Stage.OPTIMIZE):
            X = StandardScaler().fit_transform(self.inputs.data.values)
            model = KMeans(
                n_clusters=self.inputs.k,
                n_init=10,
                random_state=self.inputs.seed % (2**32),
            )
            labels = model.fit_predict(X)
        return Partition(
            labels=labels,
            k=self.inputs.k,
            objective=float(model.inertia_),
            iterations=int(model.n_iter_),
        )

    def run(
        self, method: BenchMethod
    ) -> tuple[Partition, tp.Optional[CSCResult]]:
        method = BenchMethod(method)
        inputs = self.inputs
        if method == BenchMethod.KMEANS:
            return self.plain_kmeans(), None
        if method == BenchMethod.MAHALANOBIS_CSC:
            with stage(Stage.OPTIMIZE):
                result = run_mahalanobis_csc(
                    inputs.data,
                    inputs.augmented,
                    inputs.k,
                    self.optimizer,
                    SearchStrategy.SMBO,
                )

            def space_of(r):
                return FeatureSpace([project(inputs.data, r.beta.weights)])

            return self.finalize(result, space_of), result
        if method == BenchMethod.SINGLE_KERNEL:
            with stage(Stage.OPTIMIZE):
                result = select_single_kernel(
                    self.bank, inputs.augmented, inputs.k, self.optimizer
                )
            return self.finalize(result, self.bank_space), result
        strategy = (
            SearchStrategy.RANDOM
            if method == BenchMethod.KERNEL_CSC_RANDOM
            else self.config.strategy
        )
        result = self.kernel_csc(strategy)
        return self.finalize(result, self.kernel_space), result


def run_trial(
    data: DataMatrix,
    config: ExperimentConfig,
    trial: int,
    methods: tp.Sequence[BenchMethod] = (BenchMethod.KERNEL_CSC,),
) -> list[TrialOutcome]:
    """Run ``methods`` on one trial; all share its split and constraints."""
    logger.info(
        f"Task started: trial {trial} of {config.dataset.label} "
        f"({', '.join(str(m) for m in methods)})"
    )
    inputs = prepare_trial(data, config, trial)
    runner = _TrialRunner(inputs, config)
    outcomes = []
    for method in methods:
        partition, result = runner.run(method)
        with stage(Stage.SCORE):
            report = score(
                partition, inputs.data.labels, inputs.data.test_mask
            )
        outcomes.append(
            TrialOutcome(
                dataset=config.dataset.label,
                method=str(method),
                trial=trial,
                seed=inputs.seed,
                budget=config.split.max_pairs,
                n_constraints=len(inputs.constraints),
                partition=partition,
                report=report,
                result=result,
                constraints=inputs.constraints,
            )
        )
        logger.info(
            f"Task complete: trial {trial} of {config.dataset.label} "
            f"with {method}: ARI {report.ari:.4f}"
        )
    return outcomes


def write_trial(
    outcome: TrialOutcome, out: pathlib.Path, config_hash: str
) -> None:
    meta = {"config_hash": config_hash, "seed": outcome.seed}
    directory = trial_dir(out, outcome.trial)
    save_partition(outcome.partition, directory / "partition.csv", meta)
    if outcome.constraints is not None:
        write_constraints(
            outcome.constraints, directory / "constraints.tsv", meta
        )
    write_json(directory / "metrics.json", {**outcome.record(), **meta})
    if outcome.result is not None:
        write_csv(
            outcome.result.history.to_frame(),
            directory / "history.csv",
            meta,
        )
        export_best_model(outcome.result, directory / "model.json", meta)


def run_experiment(config: ExperimentConfig) -> pd.DataFrame:
    """Run every trial of ``config`` and write its artifacts.

    Returns the aggregate metrics table also written to ``metrics.csv``.
    """
    config_hash = config.config_hash()
    out = pathlib.Path(config.out)
    with stage(Stage.WRITE):
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "config.json", config.to_payload())

    data = load_data(config.dataset, config.seed)
    records = []
    for trial in range(config.trials):
        (outcome,) = run_trial(data, config, trial)
        with stage(Stage.WRITE):
            write_trial(outcome, out, config_hash)
        records.append({**outcome.record(), "config_hash": config_hash})

    metrics = pd.DataFrame(records)
    with stage(Stage.WRITE):
        write_csv(metrics, out / "metrics.csv")
    logger.info(
        f"Experiment complete: {config.trials} trial(s), mean ARI "
        f"{np.mean(metrics['ari']):.4f}, artifacts in {out}"
    )
    return metrics
