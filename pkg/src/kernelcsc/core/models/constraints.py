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

from kernelcsc.core.enums import ConstraintKind
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.services.dataio.exceptions import InvalidConstraintError

PairLike = tp.Union[tuple[int, int], tuple[int, int, float]]


def _canonical(
    pairs: tp.Iterable[PairLike], kind: ConstraintKind, n: tp.Optional[int]
) -> dict[tuple[int, int], float]:
    canonical: dict[tuple[int, int], float] = {}
    for pair in pairs:
        if len(pair) == 2:
            i, j = pair
            weight = 1.0
        elif len(pair) == 3:
            i, j, weight = pair
        else:
            raise InvalidConstraintError(
                f"{kind} constraint must be (i, j) or (i, j, weight), "
                f"got {pair!r}"
            )
        i, j, weight = int(i), int(j), float(weight)
        if i == j:
            raise InvalidConstraintError(
                f"{kind} constraint links index {i} to itself"
            )
        if i < 0 or j < 0 or (n is not None and max(i, j) >= n):
            raise InvalidConstraintError(
                f"{kind} constraint ({i}, {j}) is out of range for n={n}"
            )
        if not np.isfinite(weight) or weight <= 0:
            raise InvalidConstraintError(
                f"{kind} constraint ({i}, {j}) has non-positive weight "
                f"{weight}"
            )
        key = (min(i, j), max(i, j))
        if key in canonical:
            raise InvalidConstraintError(
                f"Duplicate {kind} constraint {key}"
            )
        canonical[key] = weight
    return canonical


def _to_arrays(
    canonical: dict[tuple[int, int], float]
) -> tuple[IntArray, FloatArray]:
    keys = sorted(canonical)
    pairs = np.array(keys, dtype=np.int64).reshape(-1, 2)
    weights = np.array([canonical[k] for k in keys], dtype=np.float64)
    pairs.setflags(write=False)
    weights.setflags(write=False)
    return pairs, weights


@dataclasses.dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Weighted must-link and cannot-link pairs.

    Pairs are stored canonically (``i < j``) and sorted, so two sets
    with the same pairs and weights compare equal.
    """

    ml_pairs: IntArray
    ml_weights: FloatArray
    cl_pairs: IntArray
    cl_weights: FloatArray

    @classmethod
    def from_pairs(
        cls,
        must_link: tp.Iterable[PairLike] = (),
        cannot_link: tp.Iterable[PairLike] = (),
        n: tp.Optional[int] = None,
    ) -> ConstraintSet:
        ml = _canonical(must_link, ConstraintKind.MUST_LINK, n)
        cl = _canonical(cannot_link, ConstraintKind.CANNOT_LINK, n)
        both = sorted(set(ml) & set(cl))
        if both:
            raise InvalidConstraintError(
                f"Pair {both[0]} is both must-link and cannot-link"
            )
        ml_pairs, ml_weights = _to_arrays(ml)
        cl_pairs, cl_weights = _to_arrays(cl)
        return cls(ml_pairs, ml_weights, cl_pairs, cl_weights)

    @classmethod
    def empty(cls) -> ConstraintSet:
        return cls.from_pairs()

    def __len__(self) -> int:
        return self.n_must_link + self.n_cannot_link

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return (
            np.array_equal(self.ml_pairs, other.ml_pairs)
            and np.array_equal(self.ml_weights, other.ml_weights)
            and np.array_equal(self.cl_pairs, other.cl_pairs)
            and np.array_equal(self.cl_weights, other.cl_weights)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"ConstraintSet(must_link={self.n_must_link}, "
            f"cannot_link={self.n_cannot_link})"
        )

    @property
    def n_must_link(self) -> int:
        return self.ml_pairs.shape[0]

    @property
    def n_cannot_link(self) -> int:
        return self.cl_pairs.shape[0]

    @property
    def must_link(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.ml_pairs, self.ml_weights)
        ]

    @property
    def cannot_link(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.cl_pairs, self.cl_weights)
        ]

    def pairs(self, kind: ConstraintKind) -> IntArray:
        if kind == ConstraintKind.MUST_LINK:
            return self.ml_pairs
        return self.cl_pairs

    def weights(self, kind: ConstraintKind) -> FloatArray:
        if kind == ConstraintKind.MUST_LINK:
            return self.ml_weights
        return self.cl_weights

    def indices(self) -> IntArray:
        """Sorted indices of every constrained point."""
        return np.unique(
            np.concatenate([self.ml_pairs.ravel(), self.cl_pairs.ravel()])
        ).astype(np.int64)

    def max_index(self) -> int:
        indices = self.indices()
        return int(indices[-1]) if indices.size else -1

    def reindex(self, mapping: tp.Mapping[int, int]) -> ConstraintSet:
        """Renumber points; every constrained index must be mapped."""
        return ConstraintSet.from_pairs(
            must_link=[
                (mapping[i], mapping[j], w) for i, j, w in self.must_link
            ],
            cannot_link=[
                (mapping[i], mapping[j], w) for i, j, w in self.cannot_link
            ],
        )
