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
"""Candidate sampling over the sparse and dense search domains."""
import numpy as np

from kernelcsc.core.models import BetaVector
from kernelcsc.core.types import FloatArray


def sample_sparse_array(
    p: int, c: int, count: int, rng: np.random.Generator
) -> FloatArray:
    """``count x p`` candidates in ``[0, 1]^p`` with 1 to ``c`` nonzeros.

    The support size is uniform on ``{1, ..., c}`` (``c`` capped at
    ``p``), the support uniform without replacement and the active
    values uniform on ``(0, 1]``.
    """
    c = min(c, p)
    candidates = np.zeros((count, p))
    sizes = rng.integers(1, c + 1, size=count)
    for row, size in enumerate(sizes):
        support = rng.choice(p, size=size, replace=False)
        candidates[row, support] = 1.0 - rng.random(size)
    return candidates


def sample_sparse(p: int, c: int, count: int, seed: int) -> list[BetaVector]:
    rng = np.random.default_rng(seed)
    return [BetaVector(row) for row in sample_sparse_array(p, c, count, rng)]


def sample_dense_array(
    d: int, count: int, rng: np.random.Generator
) -> FloatArray:
    """``count x d`` candidates uniform on ``(0, 1]^d``."""
    return 1.0 - rng.random((count, d))
