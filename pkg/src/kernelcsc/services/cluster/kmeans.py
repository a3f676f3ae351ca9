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
"""Kernel k-means over exact Gram matrices or explicit feature maps."""
import logging
import typing as tp

import numpy as np
from django.conf import settings

from kernelcsc.core.models import FeatureMap, GramMatrix, Partition, SeedSet
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.services.cluster.exceptions import (
    EmptyClusterError,
    InvalidSeedsError,
    TooManyClustersError,
)
from kernelcsc.services.cluster.factory import new_cluster_space
from kernelcsc.services.cluster.space import ClusterSpace, GramSpace

LOGGER = logging.getLogger(__name__)


def kernel_distance(
    K: tp.Union[GramMatrix, FloatArray], i: int, cluster: tp.Sequence[int]
) -> float:
    """Squared feature-space distance of point ``i`` to a centroid.

    ``K_ii - 2/|S| sum_j K_ij + 1/|S|^2 sum_jl K_jl``, clamped at 0.
    """
    K = np.asarray(getattr(K, "values", K))
    members = np.asarray(cluster, dtype=np.int64)
    if members.size == 0:
        raise EmptyClusterError("Distance to an empty cluster")
    size = members.size
    value = (
        K[i, i]
        - 2.0 * K[i, members].sum() / size
        + K[np.ix_(members, members)].sum() / size**2
    )
    return max(float(value), 0.0)


def check_problem(n: int, seeds: SeedSet, k: int, max_iter: int) -> None:
    if k < 1 or k > n:
        raise TooManyClustersError(f"Cannot form {k} clusters of {n} points")
    if len(seeds) != k:
        raise InvalidSeedsError(f"Expected {k} seed sets, got {len(seeds)}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be positive, got {max_iter}")
    seeds.check(n)


def repair_empty(labels: IntArray, D: FloatArray, k: int) -> IntArray:
    """Move points into empty clusters, lowest empty cluster first.

    The point farthest from its centroid in ``D`` among clusters with
    at least two members moves; ties go to the lowest index.
    """
    labels = labels.copy()
    sizes = np.bincount(labels, minlength=k)
    own = D[np.arange(labels.size), labels].copy()
    for empty in np.flatnonzero(sizes == 0):
        movable = sizes[labels] >= 2
        if not movable.any():
            raise TooManyClustersError(f"Cannot fill empty cluster {empty}")
        candidates = np.where(movable, own, -np.inf)
        point = int(np.argmax(candidates))
        LOGGER.debug(
            "Moving point %d from cluster %d to empty cluster %d",
            point,
            labels[point],
            empty,
        )
        sizes[labels[point]] -= 1
        labels[point] = empty
        sizes[empty] += 1
        own[point] = 0.0
    return labels


def assign(D: FloatArray, k: int) -> IntArray:
    """Nearest centroid per point, lowest cluster on ties."""
    return repair_empty(np.argmin(D, axis=1), D, k)


def kmeans_in_space(
    space: ClusterSpace,
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
) -> Partition:
    """Lloyd iterations on implicit centroids until no label changes.

    ``Partition.trace`` holds the objective after seeding and after
    each iteration; it is non-increasing.
    """
    max_iter = max_iter or settings.KMEANS_MAX_ITER
    check_problem(space.n, seeds, k, max_iter)

    labels = assign(space.set_distances(seeds.as_arrays()), k)
    trace = [space.objective(labels, k)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new_labels = assign(space.distances(labels, k), k)
        changes = int(np.count_nonzero(new_labels != labels))
        labels = new_labels
        trace.append(space.objective(labels, k))
        if changes == 0:
            break

    return Partition(
        labels=labels,
        k=k,
        objective=trace[-1],
        iterations=iterations,
        trace=tuple(trace),
    )


def kernel_kmeans(
    K: tp.Union[GramMatrix, FloatArray],
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
) -> Partition:
    if isinstance(K, GramMatrix):
        space = new_cluster_space(K)
    else:
        space = GramSpace(K)
    return kmeans_in_space(space, seeds, k, max_iter)


def feature_map_kmeans(
    Z: tp.Union[FeatureMap, FloatArray],
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
) -> Partition:
    if not isinstance(Z, FeatureMap):
        Z = FeatureMap(values=np.asarray(Z, dtype=np.float64))
    return kmeans_in_space(new_cluster_space(Z), seeds, k, max_iter)
