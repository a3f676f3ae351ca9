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
"""Experiment and benchmark configuration.

Configurations are read from a single YAML file and then overridden by
command line flags. Every override goes back through validation, so an
invalid value is reported before any computation starts.
"""
from __future__ import annotations

import json
import pathlib
import typing as tp

import yaml
from django.conf import settings
from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    root_validator,
    validator,
)

from kernelcsc.core.enums import (
    BenchMethod,
    FinalStep,
    KernelView,
    Metric,
    SearchStrategy,
    SyntheticSuite,
)
from kernelcsc.core.exceptions import ConfigError
from kernelcsc.core.types import StrPath
from kernelcsc.core.utils.hashing import canonical_json, sha256_hex

# Fields that only decide where or how fast results are produced.
_UNHASHED_FIELDS = {"out", "workers"}


class _Model(BaseModel):
    class Config:
        extra = "forbid"
        validate_assignment = True


class SplitSpec(_Model):
    train_fraction: float = Field(0.25, gt=0.0, lt=1.0)
    pair_fraction: float = Field(0.1, gt=0.0, le=1.0)
    max_pairs: int = Field(5000, ge=1)
    seed: int = 0


class BankGrid(_Model):
    factors: list[float] = Field(
        default_factory=lambda: list(settings.FACTOR_GRID)
    )
    views: list[KernelView] = Field(
        default_factory=lambda: [KernelView.RAW, KernelView.STANDARDIZED]
    )
    median_max_pairs: int = Field(
        default_factory=lambda: settings.MEDIAN_MAX_PAIRS, ge=1
    )

    @validator("factors")
    def check_factors(cls, v):
        if not v or any(f <= 0 for f in v):
            raise ValueError("factors must be a non-empty list of positives")
        return v

    @validator("views")
    def check_views(cls, v):
        if not v:
            raise ValueError("at least one view is required")
        if len(set(v)) != len(v):
            raise ValueError("views must not repeat")
        return v


class OptimizerConfig(_Model):
    max_iters: int = Field(100, ge=1)
    sparsity: int = Field(
        default_factory=lambda: settings.OPTIMIZER_SPARSITY, ge=1
    )
    kappa: float = Field(
        default_factory=lambda: settings.OPTIMIZER_KAPPA, ge=0.0
    )
    warmup: int = Field(
        default_factory=lambda: settings.OPTIMIZER_WARMUP, ge=0
    )
    candidate_pool: int = Field(
        default_factory=lambda: settings.OPTIMIZER_CANDIDATE_POOL, ge=1
    )
    patience: tp.Optional[int] = Field(None, ge=1)
    restarts: int = Field(1, ge=1)
    kmeans_max_iter: int = Field(
        default_factory=lambda: settings.KMEANS_MAX_ITER, ge=1
    )
    n_estimators: int = Field(
        default_factory=lambda: settings.SURROGATE_N_ESTIMATORS, ge=1
    )
    # Learn the weights on all constrained points plus a sample of the
    # rest, capped at this many rows.
    learn_subsample: tp.Optional[int] = Field(None, ge=2)
    seed: int = 0


class ApproximationConfig(_Model):
    """Nystroem rank of the base kernels; ``None`` keeps exact Grams."""

    rank: tp.Optional[int] = Field(None, ge=1)

    @property
    def enabled(self) -> bool:
        return self.rank is not None


class DatasetSpec(_Model):
    path: tp.Optional[str] = None
    suite: tp.Optional[SyntheticSuite] = None
    n: int = Field(300, ge=2)
    label_column: str = "target"
    k: tp.Optional[int] = Field(None, ge=1)
    name: tp.Optional[str] = None

    @root_validator(skip_on_failure=True)
    def check_source(cls, values):
        if (values["path"] is None) == (values["suite"] is None):
            raise ValueError("a dataset needs exactly one of path or suite")
        return values

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.suite is not None:
            return str(self.suite)
        return pathlib.Path(self.path).stem


class _ProtocolConfig(_Model):
    split: SplitSpec = Field(default_factory=SplitSpec)
    bank: BankGrid = Field(default_factory=BankGrid)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    approximation: ApproximationConfig = Field(
        default_factory=ApproximationConfig
    )
    final: FinalStep = FinalStep.NONE
    trials: int = Field(1, ge=1)
    out: str = "out"
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @classmethod
    def load(
        cls, path: tp.Optional[StrPath] = None, **overrides: tp.Any
    ):
        """Read a YAML file, apply non-``None`` overrides, validate."""
        payload: dict = {}
        if path is not None:
            try:
                with open(path) as f:
                    payload = yaml.safe_load(f) or {}
            except OSError as e:
                raise ConfigError(f"Cannot read config {path}: {e}") from e
            except yaml.YAMLError as e:
                raise ConfigError(f"Config {path} is not YAML: {e}") from e
            if not isinstance(payload, dict):
                raise ConfigError(f"Config {path} must be a mapping")
        return cls.build(payload, **overrides)

    @classmethod
    def build(cls, payload: dict, **overrides: tp.Any):
        payload = dict(payload)
        approx_rank = overrides.pop("approx_rank", None)
        if approx_rank is not None:
            payload["approximation"] = {"rank": approx_rank}
        payload.update(
            {key: v for key, v in overrides.items() if v is not None}
        )
        try:
            return cls.parse_obj(payload)
        except ValidationError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e

    def to_payload(self) -> dict:
        return json.loads(self.json())

    def config_hash(self) -> str:
        payload = {
            key: value
            for key, value in self.to_payload().items()
            if key not in _UNHASHED_FIELDS
        }
        return sha256_hex(canonical_json(payload))


class ExperimentConfig(_ProtocolConfig):
    dataset: DatasetSpec
    strategy: SearchStrategy = SearchStrategy.SMBO
    # A constraint file replaces the split and the sampled pairs; its
    # constrained rows are the training rows.
    constraints: tp.Optional[str] = None


class BenchConfig(_ProtocolConfig):
    datasets: list[DatasetSpec]
    methods: list[BenchMethod] = Field(
        default_factory=lambda: [
            BenchMethod.KERNEL_CSC,
            BenchMethod.KMEANS,
        ]
    )
    trials: int = Field(10, ge=2)
    strategy: SearchStrategy = SearchStrategy.SMBO
    pair_budgets: tp.Optional[list[int]] = None
    metrics: list[Metric] = Field(default_factory=lambda: [Metric.ARI])
    alpha: float = Field(0.05, gt=0.0, lt=1.0)
    workers: int = Field(
        default_factory=lambda: settings.BENCH_WORKERS, ge=1
    )

    @validator("datasets")
    def check_datasets(cls, v):
        if not v:
            raise ValueError("at least one dataset is required")
        labels = [spec.label for spec in v]
        if len(set(labels)) != len(labels):
            raise ValueError(f"dataset names must be unique: {labels}")
        return v

    @validator("methods", "metrics")
    def check_non_empty(cls, v):
        if not v:
            raise ValueError("must not be empty")
        if len(set(v)) != len(v):
            raise ValueError("entries must not repeat")
        return v

    @validator("pair_budgets")
    def check_budgets(cls, v):
        if v is not None and (not v or any(b < 1 for b in v)):
            raise ValueError("pair budgets must be positive counts")
        return v

    def experiment(
        self,
        dataset: DatasetSpec,
        strategy: tp.Optional[SearchStrategy] = None,
        max_pairs: tp.Optional[int] = None,
    ) -> ExperimentConfig:
        """The single-dataset protocol run by one bench cell."""
        strategy = strategy or self.strategy
        split = self.split
        if max_pairs is not None:
            split = split.copy(update={"max_pairs": max_pairs})
        return ExperimentConfig(
            dataset=dataset,
            strategy=strategy,
            split=split,
            bank=self.bank,
            optimizer=self.optimizer,
            approximation=self.approximation,
            final=self.final,
            trials=self.trials,
            out=self.out,
            seed=self.seed,
        )
