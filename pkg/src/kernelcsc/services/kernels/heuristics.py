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
"""Median heuristics that scale the base-kernel parameter grid."""
import logging
import typing as tp

import numpy as np
from scipy.spatial.distance import pdist

from kernelcsc.core.models import DataMatrix
from kernelcsc.core.types import FloatArray
from kernelcsc.core.utils.pairs import all_pairs, pair_count, sample_pairs

LOGGER = logging.getLogger(__name__)

_CHUNK = 100_000


class Medians(tp.NamedTuple):
    euclidean: float
    manhattan: float
    inner: float


def _pair_statistics(
    X: FloatArray, rows: np.ndarray, cols: np.ndarray
) -> tuple[FloatArray, FloatArray, FloatArray]:
    euclidean, manhattan, inner = [], [], []
    for start in range(0, rows.size, _CHUNK):
        a = X[rows[start : start + _CHUNK]]
        b = X[cols[start : start + _CHUNK]]
        diff = a - b
        euclidean.append(np.sqrt(np.einsum("ij,ij->i", diff, diff)))
        manhattan.append(np.abs(diff).sum(axis=1))
        inner.append(np.einsum("ij,ij->i", a, b))
    return (
        np.concatenate(euclidean),
        np.concatenate(manhattan),
        np.concatenate(inner),
    )


def median_heuristics(
    data: tp.Union[DataMatrix, FloatArray],
    max_pairs: int,
    seed: int = 0,
) -> Medians:
    """Median Euclidean, Manhattan distance and inner product over pairs.

    Exact when all ``n(n-1)/2`` pairs fit under ``max_pairs``, otherwise
    taken over ``max_pairs`` uniformly sampled pairs.
    """
    X = np.asarray(getattr(data, "values", data), dtype=np.float64)
    n = X.shape[0]
    if pair_count(n) <= max_pairs:
        rows, cols = all_pairs(n)
        euclidean = pdist(X, "euclidean")
        manhattan = pdist(X, "cityblock")
        inner = np.einsum("ij,ij->i", X[rows], X[cols])
    else:
        rng = np.random.default_rng(seed)
        rows, cols = sample_pairs(n, max_pairs, rng)
        euclidean, manhattan, inner = _pair_statistics(X, rows, cols)
        LOGGER.debug(
            "Median heuristics over %d of %d pairs", max_pairs, pair_count(n)
        )
    return Medians(
        euclidean=float(np.median(euclidean)),
        manhattan=float(np.median(manhattan)),
        inner=float(np.median(inner)),
    )
