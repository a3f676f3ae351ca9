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
from .clustering import Partition, SeedSet
from .config import (
    ApproximationConfig,
    BankGrid,
    BenchConfig,
    DatasetSpec,
    ExperimentConfig,
    OptimizerConfig,
    SplitSpec,
)
from .constraints import ConstraintSet
from .data import DataMatrix
from .evaluation import MetricReport, RankTable
from .history import History, HistoryEntry
from .kernels import (
    BetaVector,
    FeatureMap,
    GramMatrix,
    KernelBank,
    KernelDescriptor,
)

__all__ = [
    "ApproximationConfig",
    "BankGrid",
    "BenchConfig",
    "BetaVector",
    "ConstraintSet",
    "DataMatrix",
    "DatasetSpec",
    "ExperimentConfig",
    "FeatureMap",
    "GramMatrix",
    "History",
    "HistoryEntry",
    "KernelBank",
    "KernelDescriptor",
    "MetricReport",
    "OptimizerConfig",
    "Partition",
    "RankTable",
    "SeedSet",
    "SplitSpec",
]
