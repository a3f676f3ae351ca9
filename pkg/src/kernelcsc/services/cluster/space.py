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
"""Kernel-space geometry shared by every clustering path.

A cluster space answers squared feature-space distances between points
and the implicit centroids of index sets, either from an exact Gram
matrix or from explicit feature maps.
"""
import logging
import typing as tp
from abc import ABC, abstractmethod

import numpy as np
from django.conf import settings

from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.core.utils.pairs import pair_count, sample_pairs
from kernelcsc.services.cluster.exceptions import EmptyClusterError

LOGGER = logging.getLogger(__name__)

_ROW_CHUNK = 512


def labels_to_sets(labels: IntArray, k: int) -> list[IntArray]:
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(k + 1))
    return [order[bounds[c] : bounds[c + 1]] for c in range(k)]


def indicator(n: int, sets: tp.Sequence[IntArray]) -> FloatArray:
    """``n x k`` matrix whose column ``c`` averages over ``sets[c]``."""
    H = np.zeros((n, len(sets)))
    for c, members in enumerate(sets):
        if len(members) == 0:
            raise EmptyClusterError(f"Cluster {c} is empty")
        H[members, c] = 1.0 / len(members)
    return H


class ClusterSpace(ABC):
    @property
    @abstractmethod
    def n(self) -> int:
        pass

    @abstractmethod
    def diag(self) -> FloatArray:
        """Squared feature norms ``K_ii``."""

    @abstractmethod
    def centroid_terms(self, H: FloatArray) -> tuple[FloatArray, FloatArray]:
        """Inner products with the centroids of ``H`` and their norms.

        Returns the ``n x k`` matrix ``<phi_i, mu_c>`` and the vector of
        ``|mu_c|^2``.
        """

    @abstractmethod
    def distances_between(
        self, rows: IntArray, cols: IntArray
    ) -> FloatArray:
        """Squared distances between every row and every column point."""

    @abstractmethod
    def pair_distances(self, i: IntArray, j: IntArray) -> FloatArray:
        """Squared distances of the pairs ``(i[t], j[t])``."""

    def set_distances(self, sets: tp.Sequence[IntArray]) -> FloatArray:
        """``n x len(sets)`` squared distances to the set centroids."""
        cross, norms = self.centroid_terms(indicator(self.n, sets))
        D = self.diag()[:, None] - 2.0 * cross + norms[None, :]
        return np.maximum(D, 0.0)

    def distances(self, labels: IntArray, k: int) -> FloatArray:
        return self.set_distances(labels_to_sets(labels, k))

    def objective(self, labels: IntArray, k: int) -> float:
        """``tr(K) - sum_c sum_{i,j in S_c} K_ij / |S_c|``."""
        sets = labels_to_sets(labels, k)
        _, norms = self.centroid_terms(indicator(self.n, sets))
        sizes = np.array([len(s) for s in sets], dtype=np.float64)
        return float(self.diag().sum() - sizes @ norms)

    def _exact_d_max(self) -> float:
        everything = np.arange(self.n)
        best = 0.0
        for start in range(0, self.n, _ROW_CHUNK):
            rows = everything[start : start + _ROW_CHUNK]
            block = self.distances_between(rows, everything)
            best = max(best, float(block.max()))
        return best

    def d_max(self, seed: int = 0) -> float:
        """Largest pairwise squared distance.

        Exact when all pairs fit under ``DMAX_MAX_PAIRS``, otherwise the
        maximum over that many sampled pairs.
        """
        cap = settings.DMAX_MAX_PAIRS
        if pair_count(self.n) <= cap:
            return self._exact_d_max()
        rng = np.random.default_rng(seed)
        i, j = sample_pairs(self.n, cap, rng)
        LOGGER.debug("Estimating D_max over %d sampled pairs", cap)
        return float(self.pair_distances(i, j).max())


class GramSpace(ClusterSpace):
    """Exact space of an ``n x n`` kernel matrix."""

    def __init__(self, K: FloatArray):
        self.K = np.asarray(K, dtype=np.float64)
        self._diag = np.diag(self.K).copy()

    @property
    def n(self) -> int:
        return self.K.shape[0]

    def diag(self) -> FloatArray:
        return self._diag

    def centroid_terms(self, H: FloatArray) -> tuple[FloatArray, FloatArray]:
        KH = self.K @ H
        return KH, np.einsum("ic,ic->c", H, KH)

    def distances_between(
        self, rows: IntArray, cols: IntArray
    ) -> FloatArray:
        D = (
            self._diag[rows][:, None]
            + self._diag[cols][None, :]
            - 2.0 * self.K[np.ix_(rows, cols)]
        )
        return np.maximum(D, 0.0)

    def pair_distances(self, i: IntArray, j: IntArray) -> FloatArray:
        D = self._diag[i] + self._diag[j] - 2.0 * self.K[i, j]
        return np.maximum(D, 0.0)

    def d_max(self, seed: int = 0) -> float:
        # The Gram matrix is already quadratic in n.
        return self._exact_d_max()


class FeatureSpace(ClusterSpace):
    """Space of weighted explicit maps, ``K = sum_b w_b Z_b Z_b^T``.

    The blocks are never concatenated.
    """

    def __init__(
        self,
        blocks: tp.Sequence[FloatArray],
        weights: tp.Optional[tp.Sequence[float]] = None,
    ):
        self.blocks = [np.asarray(Z, dtype=np.float64) for Z in blocks]
        if weights is None:
            weights = [1.0] * len(self.blocks)
        self.weights = [float(w) for w in weights]
        self._diag = np.zeros(self.blocks[0].shape[0])
        for Z, w in zip(self.blocks, self.weights):
            self._diag += w * np.einsum("ij,ij->i", Z, Z)

    @property
    def n(self) -> int:
        return self.blocks[0].shape[0]

    def diag(self) -> FloatArray:
        return self._diag

    def centroid_terms(self, H: FloatArray) -> tuple[FloatArray, FloatArray]:
        cross = np.zeros((self.n, H.shape[1]))
        norms = np.zeros(H.shape[1])
        for Z, w in zip(self.blocks, self.weights):
            C = H.T @ Z
            cross += w * (Z @ C.T)
            norms += w * np.einsum("cj,cj->c", C, C)
        return cross, norms

    def distances_between(
        self, rows: IntArray, cols: IntArray
    ) -> FloatArray:
        D = self._diag[rows][:, None] + self._diag[cols][None, :]
        for Z, w in zip(self.blocks, self.weights):
            D -= 2.0 * w * (Z[rows] @ Z[cols].T)
        return np.maximum(D, 0.0)

    def pair_distances(self, i: IntArray, j: IntArray) -> FloatArray:
        D = np.zeros(len(i))
        for Z, w in zip(self.blocks, self.weights):
            diff = Z[i] - Z[j]
            D += w * np.einsum("ij,ij->i", diff, diff)
        return D
