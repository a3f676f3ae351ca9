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

from enum import Enum


class DjangoStrEnum(str, Enum):
    @classmethod
    def choices(cls):
        return tuple((e.value, e.value) for e in cls)

    @classmethod
    def values(cls):
        return tuple(e.value for e in cls)

    def __str__(self):
        return str(self.value)


# =======================================================================


class KernelFamily(DjangoStrEnum):
    RBF = "rbf"
    LAPLACE = "laplace"
    POLYNOMIAL = "polynomial"
    SIGMOID = "sigmoid"
    LINEAR = "linear"


class KernelView(DjangoStrEnum):
    """Which copy of the data a base kernel is computed on."""

    RAW = "raw"
    STANDARDIZED = "standardized"


class ConstraintKind(DjangoStrEnum):
    MUST_LINK = "ML"
    CANNOT_LINK = "CL"


class SearchStrategy(DjangoStrEnum):
    SMBO = "smbo"
    RANDOM = "random"


class FinalStep(DjangoStrEnum):
    NONE = "none"
    CONSTRAINED = "constrained"


class BenchMethod(DjangoStrEnum):
    KERNEL_CSC = "kernelcsc"
    KERNEL_CSC_RANDOM = "kernelcsc-random"
    MAHALANOBIS_CSC = "mahalanobis-csc"
    KMEANS = "kmeans"
    SINGLE_KERNEL = "single-kernel"


class Metric(DjangoStrEnum):
    ARI = "ari"
    NMI = "nmi"
    AMI = "ami"
    FOWLKES_MALLOWS = "fowlkes_mallows"
    PAIRWISE_F = "pairwise_f"


class SyntheticSuite(DjangoStrEnum):
    NOISY_BLOBS = "noisy_blobs"
    RINGS = "rings"
    ANISOTROPIC = "anisotropic"
    SCALING = "scaling"


class Stage(DjangoStrEnum):
    """Named stages of an experiment trial, reported on failure."""

    CONFIG = "config"
    LOAD = "load"
    SPLIT = "split"
    CONSTRAINTS = "constraints"
    BANK = "bank"
    OPTIMIZE = "optimize"
    FINALIZE = "finalize"
    SCORE = "score"
    WRITE = "write"
