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
"""Kernel k-means with a soft penalty on violated constraints.

A violated cannot-link pair costs ``w * d(i, j)``; a violated must-link
pair costs ``w * (D_max - d(i, j))``, where ``d`` is the squared
feature-space distance and ``D_max`` the largest one.
"""
import logging
import typing as tp

import numpy as np
from django.conf import settings

from kernelcsc.core.models import ConstraintSet, GramMatrix, Partition, SeedSet
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.services.cluster.factory import new_cluster_space
from kernelcsc.services.cluster.kmeans import (
    assign,
    check_problem,
    repair_empty,
)
from kernelcsc.services.cluster.space import ClusterSpace

LOGGER = logging.getLogger(__name__)

# Relative slack before a sweep counts as an increase.
_SWEEP_TOL = 1e-9


def constraint_penalty(
    space: ClusterSpace,
    labels: IntArray,
    cs: ConstraintSet,
    d_max: float,
) -> float:
    penalty = 0.0
    if cs.n_cannot_link:
        i, j = cs.cl_pairs[:, 0], cs.cl_pairs[:, 1]
        violated = labels[i] == labels[j]
        penalty += float(
            (cs.cl_weights * space.pair_distances(i, j))[violated].sum()
        )
    if cs.n_must_link:
        i, j = cs.ml_pairs[:, 0], cs.ml_pairs[:, 1]
        violated = labels[i] != labels[j]
        cost = d_max - space.pair_distances(i, j)
        penalty += float((cs.ml_weights * cost)[violated].sum())
    return penalty


class _Partners:
    """Per-point constraint partners with precomputed pair costs."""

    def __init__(self, space: ClusterSpace, cs: ConstraintSet, d_max: float):
        self.cannot: dict[int, list[tuple[int, float]]] = {}
        self.must: dict[int, list[tuple[int, float]]] = {}
        if cs.n_cannot_link:
            i, j = cs.cl_pairs[:, 0], cs.cl_pairs[:, 1]
            costs = cs.cl_weights * space.pair_distances(i, j)
            self._add(self.cannot, i, j, costs)
        if cs.n_must_link:
            i, j = cs.ml_pairs[:, 0], cs.ml_pairs[:, 1]
            costs = cs.ml_weights * (d_max - space.pair_distances(i, j))
            self._add(self.must, i, j, costs)
        self.points = np.array(
            sorted(set(self.cannot) | set(self.must)), dtype=np.int64
        )

    @staticmethod
    def _add(table, first, second, costs) -> None:
        for a, b, cost in zip(first.tolist(), second.tolist(), costs.tolist()):
            table.setdefault(a, []).append((b, cost))
            table.setdefault(b, []).append((a, cost))

    def costs(self, point: int, labels: IntArray, k: int) -> FloatArray:
        extra = np.zeros(k)
        for partner, cost in self.cannot.get(point, ()):
            extra[labels[partner]] += cost
        for partner, cost in self.must.get(point, ()):
            extra += cost
            extra[labels[partner]] -= cost
        return extra


def constrained_kmeans_in_space(
    space: ClusterSpace,
    cs: ConstraintSet,
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
    seed: int = 0,
    d_max: tp.Optional[float] = None,
) -> Partition:
    """Minimize the kernel k-means objective plus the penalty.

    Each sweep fixes the centroids, assigns unconstrained points to
    their nearest centroid and then visits constrained points in a
    seeded random order. A constrained point picks the cluster
    minimizing distance plus penalty against its partners' labels,
    which are already updated for partners visited earlier in the
    sweep and stale otherwise. A sweep that would increase the total
    is discarded and the loop stops.
    """
    max_iter = max_iter or settings.KMEANS_MAX_ITER
    check_problem(space.n, seeds, k, max_iter)
    if d_max is None:
        d_max = space.d_max(seed)
    partners = _Partners(space, cs, d_max)

    def total(labels: IntArray) -> float:
        return space.objective(labels, k) + constraint_penalty(
            space, labels, cs, d_max
        )

    labels = assign(space.set_distances(seeds.as_arrays()), k)
    trace = [total(labels)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        D = space.distances(labels, k)
        working = np.argmin(D, axis=1)
        working[partners.points] = labels[partners.points]
        rng = np.random.default_rng(derive_seed(seed, iterations))
        for point in rng.permutation(partners.points).tolist():
            cost = D[point] + partners.costs(point, working, k)
            working[point] = int(np.argmin(cost))
        working = repair_empty(working, D, k)

        value = total(working)
        if value > trace[-1] + _SWEEP_TOL * max(1.0, abs(trace[-1])):
            LOGGER.debug(
                "Sweep %d would raise the objective to %.6g; stopping",
                iterations,
                value,
            )
            break
        changes = int(np.count_nonzero(working != labels))
        labels = working
        trace.append(value)
        if changes == 0:
            break

    return Partition(
        labels=labels,
        k=k,
        objective=trace[-1],
        iterations=iterations,
        trace=tuple(trace),
    )


def constrained_kernel_kmeans(
    K: tp.Union[GramMatrix, ClusterSpace, FloatArray],
    cs: ConstraintSet,
    seeds: SeedSet,
    k: int,
    max_iter: tp.Optional[int] = None,
    seed: int = 0,
) -> Partition:
    if isinstance(K, np.ndarray):
        K = GramMatrix(values=K)
    space = new_cluster_space(K)
    return constrained_kmeans_in_space(space, cs, seeds, k, max_iter, seed)
