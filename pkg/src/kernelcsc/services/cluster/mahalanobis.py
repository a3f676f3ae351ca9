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
"""Euclidean Lloyd k-means and its diagonal-metric variant."""
import typing as tp

import numpy as np
from django.conf import settings
from scipy.spatial.distance import cdist
from sklearn.preprocessing import StandardScaler

from kernelcsc.core.models import DataMatrix, Partition, SeedSet
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.services.cluster.exceptions import InvalidWeightsError
from kernelcsc.services.cluster.kmeans import assign, check_problem


def _centroids(X: FloatArray, sets: tp.Sequence[IntArray]) -> FloatArray:
    return np.vstack([X[members].mean(axis=0) for members in sets])


def _sse(X: FloatArray, labels: IntArray, k: int) -> float:
    total = 0.0
    for c in range(k):
        members = X[labels == c]
        total += float(((members - members.mean(axis=0)) ** 2).sum())
    return total


def lloyd_kmeans(
    X: FloatArray,
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
) -> Partition:
    """Plain k-means with explicit centroids.

    Seed centroids are the means of the seed sets. Ties and empty
    clusters follow the same rules as kernel k-means.
    """
    X = np.asarray(X, dtype=np.float64)
    max_iter = max_iter or settings.KMEANS_MAX_ITER
    check_problem(X.shape[0], seeds, k, max_iter)

    centroids = _centroids(X, seeds.as_arrays())
    labels = assign(cdist(X, centroids, "sqeuclidean"), k)
    trace = [_sse(X, labels, k)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        members = [np.flatnonzero(labels == c) for c in range(k)]
        centroids = _centroids(X, members)
        new_labels = assign(cdist(X, centroids, "sqeuclidean"), k)
        changes = int(np.count_nonzero(new_labels != labels))
        labels = new_labels
        trace.append(_sse(X, labels, k))
        if changes == 0:
            break

    return Partition(
        labels=labels,
        k=k,
        objective=trace[-1],
        iterations=iterations,
        trace=tuple(trace),
    )


def check_weights(w: FloatArray, d: int) -> FloatArray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (d,):
        raise InvalidWeightsError(f"Expected {d} weights, got {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidWeightsError("Weights must be finite and non-negative")
    if not np.any(w > 0):
        raise InvalidWeightsError("All-zero weights collapse every point")
    return w


def project(data: DataMatrix, w: FloatArray) -> FloatArray:
    """Standardized data with column ``j`` scaled by ``w[j]``."""
    w = check_weights(w, data.d)
    return StandardScaler().fit_transform(data.values) * w


def diagonal_mahalanobis_kmeans(
    data: DataMatrix,
    w: FloatArray,
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
) -> Partition:
    return lloyd_kmeans(project(data, w), seeds, k, max_iter)
