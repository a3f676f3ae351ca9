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
from pydantic import BaseModel, root_validator

from kernelcsc.core.enums import KernelFamily, KernelView
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.services.kernels.exceptions import (
    InvalidBetaError,
    InvalidDescriptorError,
)

# Number of parameters each family carries, in order.
#   rbf:        (width,)
#   laplace:    (rate,)
#   polynomial: (degree, offset)
#   sigmoid:    (slope, offset)
#   linear:     ()
PARAM_COUNTS = {
    KernelFamily.RBF: 1,
    KernelFamily.LAPLACE: 1,
    KernelFamily.POLYNOMIAL: 2,
    KernelFamily.SIGMOID: 2,
    KernelFamily.LINEAR: 0,
}


class KernelDescriptor(BaseModel):
    family: KernelFamily
    view: KernelView = KernelView.RAW
    params: tuple[float, ...] = ()

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def check_params(cls, values):
        family = values["family"]
        params = tuple(float(p) for p in values["params"])
        expected = PARAM_COUNTS[family]
        if len(params) != expected:
            raise ValueError(
                f"{family} kernel takes {expected} parameters, "
                f"got {len(params)}"
            )
        if not all(np.isfinite(params)):
            raise ValueError(f"{family} kernel parameters must be finite")
        if family in (KernelFamily.RBF, KernelFamily.LAPLACE):
            if params[0] <= 0:
                raise ValueError(f"{family} width must be positive")
        if family == KernelFamily.POLYNOMIAL:
            if params[0] not in (2.0, 3.0):
                raise ValueError("polynomial degree must be 2 or 3")
        values["params"] = params
        return values

    @classmethod
    def create(
        cls,
        family: KernelFamily,
        view: KernelView = KernelView.RAW,
        params: tp.Sequence[float] = (),
    ) -> KernelDescriptor:
        """Build a descriptor, raising the kernel module's error type."""
        try:
            return cls(family=family, view=view, params=tuple(params))
        except ValueError as e:
            raise InvalidDescriptorError(str(e)) from e

    @property
    def label(self) -> str:
        args = ",".join(f"{p:.6g}" for p in self.params)
        return f"{self.family}({args})/{self.view}"


@dataclasses.dataclass(frozen=True, eq=False)
class GramMatrix:
    """A symmetric PSD ``n x n`` kernel matrix.

    ``scale`` is the positive factor applied during trace normalization.
    """

    values: FloatArray
    descriptor: tp.Optional[KernelDescriptor] = None
    scale: float = 1.0

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclasses.dataclass(frozen=True, eq=False)
class FeatureMap:
    """An explicit ``n x q`` map ``Z`` whose implied kernel is ``Z Z^T``."""

    values: FloatArray
    descriptor: tp.Optional[KernelDescriptor] = None
    scale: float = 1.0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def rank(self) -> int:
        return self.values.shape[1]

    def implied_kernel(self) -> FloatArray:
        return self.values @ self.values.T


BankEntry = tp.Union[GramMatrix, FeatureMap]


@dataclasses.dataclass(frozen=True, eq=False)
class KernelBank:
    """Ordered base kernels, all exact or all approximate."""

    kernels: tuple[BankEntry, ...]
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kernels", tuple(self.kernels))
        kinds = {type(kernel) for kernel in self.kernels}
        if len(kinds) > 1:
            raise InvalidDescriptorError(
                "A bank cannot mix Gram matrices and feature maps"
            )

    def __len__(self) -> int:
        return len(self.kernels)

    def __getitem__(self, index: int) -> BankEntry:
        return self.kernels[index]

    def __iter__(self) -> tp.Iterator[BankEntry]:
        return iter(self.kernels)

    @property
    def p(self) -> int:
        return len(self.kernels)

    @property
    def n(self) -> int:
        return self.kernels[0].n if self.kernels else 0

    @property
    def approximate(self) -> bool:
        return bool(self.kernels) and isinstance(self.kernels[0], FeatureMap)

    @property
    def descriptors(self) -> list[tp.Optional[KernelDescriptor]]:
        return [kernel.descriptor for kernel in self.kernels]


@dataclasses.dataclass(frozen=True, eq=False)
class BetaVector:
    """Combination weights in ``[0, 1]^p`` with at least one nonzero."""

    weights: FloatArray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64, copy=True)
        if weights.ndim != 1 or weights.size == 0:
            raise InvalidBetaError("Weights must be a non-empty vector")
        if not np.all(np.isfinite(weights)):
            raise InvalidBetaError("Weights must be finite")
        if np.any(weights < 0) or np.any(weights > 1):
            raise InvalidBetaError("Weights must lie in [0, 1]")
        if not np.any(weights > 0):
            raise InvalidBetaError("All-zero weights define no kernel")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def one_hot(cls, p: int, index: int, value: float = 1.0) -> BetaVector:
        weights = np.zeros(p)
        weights[index] = value
        return cls(weights)

    def __len__(self) -> int:
        return self.weights.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BetaVector):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    __hash__ = None

    @property
    def support(self) -> IntArray:
        return np.flatnonzero(self.weights).astype(np.int64)

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.weights))

    def validate(self, p: int, sparsity: tp.Optional[int] = None) -> None:
        if len(self) != p:
            raise InvalidBetaError(
                f"Expected {p} weights, got {len(self)}"
            )
        if sparsity is not None and self.nnz > sparsity:
            raise InvalidBetaError(
                f"{self.nnz} active kernels exceed sparsity {sparsity}"
            )
