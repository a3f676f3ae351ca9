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
"""Must-link components and constraint augmentation."""
import itertools
import logging
import typing as tp

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _components

from kernelcsc.core.models import ConstraintSet
from kernelcsc.core.types import IntArray
from kernelcsc.services.dataio.exceptions import (
    InconsistentConstraintsError,
    InvalidConstraintError,
)

LOGGER = logging.getLogger(__name__)

Component = tuple[int, ...]


def _component_labels(cs: ConstraintSet, n: int) -> IntArray:
    ml = cs.ml_pairs
    graph = coo_matrix(
        (np.ones(ml.shape[0]), (ml[:, 0], ml[:, 1])), shape=(n, n)
    )
    _, labels = _components(graph, directed=False)
    return labels


def connected_components(cs: ConstraintSet, n: int) -> list[Component]:
    """Partition ``{0, ..., n-1}`` into components of the must-link graph.

    Components are sorted by size (largest first), ties by their
    smallest member.
    """
    if cs.max_index() >= n:
        raise InvalidConstraintError(
            f"Constraint index {cs.max_index()} is out of range for n={n}"
        )
    labels = _component_labels(cs, n)
    order = np.argsort(labels, kind="stable")
    boundaries = np.flatnonzero(np.diff(labels[order])) + 1
    groups = np.split(order, boundaries)
    groups.sort(key=lambda g: (-g.size, int(g[0])))
    return [tuple(int(i) for i in g) for g in groups]


def augment_constraints(
    cs: ConstraintSet, n: tp.Optional[int] = None
) -> ConstraintSet:
    """Close must-links transitively and add entailed cannot-links.

    Every pair inside a must-link component becomes must-link; a
    cannot-link between two components links all their members. New
    pairs get unit weight, existing pairs keep theirs.
    """
    if len(cs) == 0:
        return cs
    n = cs.max_index() + 1 if n is None else n
    labels = _component_labels(cs, n)
    members: dict[int, list[int]] = {}
    for i in cs.indices().tolist():
        members.setdefault(int(labels[i]), []).append(i)

    must_link: dict[tuple[int, int], float] = {}
    touched = {int(labels[i]) for i, _ in cs.ml_pairs.tolist()}
    for component in sorted(touched):
        for i, j in itertools.combinations(members[component], 2):
            must_link.setdefault((i, j), 1.0)
    for i, j, w in cs.must_link:
        must_link[(i, j)] = w

    cannot_link: dict[tuple[int, int], float] = {}
    bridged: set[tuple[int, int]] = set()
    for a, b in cs.cl_pairs.tolist():
        ca, cb = int(labels[a]), int(labels[b])
        if ca == cb:
            raise InconsistentConstraintsError((a, b))
        bridged.add((min(ca, cb), max(ca, cb)))
    for ca, cb in sorted(bridged):
        for x, y in itertools.product(members[ca], members[cb]):
            cannot_link[(min(x, y), max(x, y))] = 1.0
    for i, j, w in cs.cannot_link:
        cannot_link[(i, j)] = w

    augmented = ConstraintSet.from_pairs(
        must_link=[(i, j, w) for (i, j), w in must_link.items()],
        cannot_link=[(i, j, w) for (i, j), w in cannot_link.items()],
        n=n,
    )
    LOGGER.debug(
        "Augmented %d constraints to %d (%d must-link, %d cannot-link)",
        len(cs),
        len(augmented),
        augmented.n_must_link,
        augmented.n_cannot_link,
    )
    return augmented
