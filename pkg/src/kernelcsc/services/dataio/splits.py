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
"""Train/test splits and constraint sampling for the evaluation protocol.

Constraints are sampled among training points only; test points are
used for scoring.
"""
import logging
import math
import typing as tp

import numpy as np

from kernelcsc.core.models import ConstraintSet, DataMatrix, SplitSpec
from kernelcsc.core.types import IntArray
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.core.utils.pairs import pair_count, sample_pairs
from kernelcsc.services.dataio.exceptions import (
    ConstraintSamplingError,
    StratificationError,
)

LOGGER = logging.getLogger(__name__)

# Random streams derived from the split seed.
_SPLIT_STREAM = 0
_PAIR_STREAM = 1
_SUBSAMPLE_STREAM = 2


def _class_quotas(
    counts: IntArray, total: int, rng: np.random.Generator
) -> IntArray:
    """Largest-remainder apportionment of ``total`` over classes."""
    exact = total * counts / counts.sum()
    quotas = np.floor(exact).astype(np.int64)
    remainders = exact - quotas
    missing = total - int(quotas.sum())
    if missing > 0:
        # Random tie order, then a stable sort on the remainders.
        order = rng.permutation(counts.size)
        ranked = order[np.argsort(-remainders[order], kind="stable")]
        quotas[ranked[:missing]] += 1
    return quotas


def stratified_split(
    data: DataMatrix, spec: SplitSpec, k: tp.Optional[int] = None
) -> DataMatrix:
    """Mark about ``train_fraction`` of the rows as training rows.

    Per-class proportions are preserved up to rounding. When ``k`` is
    given, the training set must hold at least ``k`` points.
    """
    if data.labels is None:
        raise StratificationError("A stratified split needs labels")
    classes, inverse, counts = np.unique(
        data.labels, return_inverse=True, return_counts=True
    )
    if np.any(counts < 2):
        single = classes[counts < 2][0]
        raise StratificationError(
            f"Class {single} has a single member and cannot be stratified"
        )

    total = int(math.floor(spec.train_fraction * data.n + 0.5))
    if k is not None and total < k:
        raise StratificationError(
            f"{total} training points cannot seed {k} clusters"
        )

    rng = np.random.default_rng(derive_seed(spec.seed, _SPLIT_STREAM))
    quotas = _class_quotas(counts, total, rng)
    mask = np.zeros(data.n, dtype=bool)
    for c, quota in enumerate(quotas):
        members = np.flatnonzero(inverse == c)
        mask[rng.choice(members, size=quota, replace=False)] = True

    LOGGER.debug(
        "Split %d rows into %d train and %d test rows",
        data.n,
        total,
        data.n - total,
    )
    return data.with_train_mask(mask)


def pair_budget(t: int, spec: SplitSpec) -> int:
    """Number of pairs sampled among ``t`` training points."""
    total = pair_count(t)
    # The epsilon keeps e.g. 0.1 * 5050 from rounding up to 506.
    wanted = math.ceil(spec.pair_fraction * total - 1e-9)
    return min(wanted, spec.max_pairs, total)


def sample_constraints(data: DataMatrix, spec: SplitSpec) -> ConstraintSet:
    """Sample training pairs uniformly and label them from ground truth.

    Same-class pairs become must-link, the rest cannot-link, all with
    unit weight.
    """
    if data.labels is None or data.train_mask is None:
        raise ConstraintSamplingError(
            "Sampling constraints needs labels and a train mask"
        )
    train = data.train_indices
    if train.size < 2:
        raise ConstraintSamplingError(
            f"Need at least 2 training points, got {train.size}"
        )

    count = pair_budget(train.size, spec)
    rng = np.random.default_rng(derive_seed(spec.seed, _PAIR_STREAM))
    rows, cols = sample_pairs(train.size, count, rng)
    first, second = train[rows], train[cols]
    same = data.labels[first] == data.labels[second]
    cs = ConstraintSet.from_pairs(
        must_link=zip(first[same].tolist(), second[same].tolist()),
        cannot_link=zip(first[~same].tolist(), second[~same].tolist()),
        n=data.n,
    )
    LOGGER.info(
        "Sampled %d constraints (%d must-link, %d cannot-link) "
        "among %d training points",
        len(cs),
        cs.n_must_link,
        cs.n_cannot_link,
        train.size,
    )
    return cs


def subsample_unconstrained(
    n: int, cs: ConstraintSet, size: int, seed: int
) -> IntArray:
    """Keep every constrained row plus a uniform sample of the others.

    Returns ``size`` sorted row indices when possible.
    """
    if size >= n:
        return np.arange(n, dtype=np.int64)
    constrained = cs.indices()
    room = size - constrained.size
    if room <= 0:
        return constrained
    free = np.setdiff1d(np.arange(n, dtype=np.int64), constrained)
    rng = np.random.default_rng(derive_seed(seed, _SUBSAMPLE_STREAM))
    picked = rng.choice(free, size=room, replace=False)
    return np.sort(np.concatenate([constrained, picked])).astype(np.int64)
