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
"""Farthest-first seeding from must-link components."""
import logging
import typing as tp

import numpy as np

from kernelcsc.core.models import SeedSet
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.services.cluster.exceptions import TooManyClustersError
from kernelcsc.services.cluster.space import ClusterSpace

LOGGER = logging.getLogger(__name__)

# Minimum distances below this mean no distinct point is left.
_DISTINCT_TOL = 1e-12


def farthest_first_init(
    components: tp.Sequence[tp.Sequence[int]],
    space: ClusterSpace,
    k: int,
    restart: int = 0,
    seed: int = 0,
) -> SeedSet:
    """Seed ``k`` clusters from must-link components, then singletons.

    The largest non-singleton components (in the given order) seed
    first. Remaining seeds are single points added greedily, each
    maximizing its minimum distance to the centroids of the seeds so
    far; ties go to the lowest index. Without component seeds the
    first point is the one farthest from the global centroid. On
    ``restart > 0`` the first single point is drawn at random instead.
    """
    n = space.n
    if k > n:
        raise TooManyClustersError(f"Cannot seed {k} clusters with {n} points")

    seeds = [tuple(c) for c in components if len(c) >= 2][:k]
    taken = np.zeros(n, dtype=bool)
    for center in seeds:
        taken[list(center)] = True

    if len(seeds) < k:
        if seeds:
            nearest = space.set_distances(
                [np.array(c) for c in seeds]
            ).min(axis=1)
        else:
            nearest = space.set_distances([np.arange(n)])[:, 0]

    randomize = restart > 0
    while len(seeds) < k:
        free = np.flatnonzero(~taken)
        if free.size == 0:
            raise TooManyClustersError(
                f"No unseeded point left for cluster {len(seeds)}"
            )
        if randomize:
            rng = np.random.default_rng(derive_seed(seed, restart))
            point = int(rng.choice(free))
            randomize = False
        else:
            point = int(free[np.argmax(nearest[free])])
            if seeds and nearest[point] <= _DISTINCT_TOL:
                raise TooManyClustersError(
                    f"Fewer than {k} distinct points to seed from"
                )
        to_point = space.distances_between(
            np.arange(n), np.array([point])
        )[:, 0]
        nearest = np.minimum(nearest, to_point) if seeds else to_point
        seeds.append((point,))
        taken[point] = True

    LOGGER.debug(
        "Seeded %d clusters from %d components",
        k,
        sum(1 for s in seeds if len(s) >= 2),
    )
    return SeedSet(centers=tuple(seeds))
