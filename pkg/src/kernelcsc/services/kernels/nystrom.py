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
"""Low-rank Nystroem feature maps for the approximate bank."""
import logging
import typing as tp

import numpy as np
import scipy.linalg
from django.conf import settings
from joblib import Parallel, delayed

from kernelcsc.core.models import (
    BankGrid,
    BetaVector,
    DataMatrix,
    FeatureMap,
    KernelBank,
    KernelDescriptor,
)
from kernelcsc.core.types import FloatArray
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.services.kernels.bank import (
    EIGEN_CUTOFF,
    bank_fingerprint,
    collect,
    evaluate_kernel,
    plan_bank,
)
from kernelcsc.services.kernels.cache import cached_bank
from kernelcsc.services.kernels.exceptions import KernelError, RankError

LOGGER = logging.getLogger(__name__)


def nystrom_map(
    data: tp.Union[DataMatrix, FloatArray],
    descriptor: KernelDescriptor,
    q: int,
    seed: int = 0,
) -> FeatureMap:
    """Rank-``q`` map ``Z = K_nq W^{-1/2}`` from ``q`` random landmarks.

    ``W^{-1/2}`` is the pseudo-inverse square root of the landmark Gram
    matrix; eigenvalues below ``EIGEN_CUTOFF * max`` are truncated.
    """
    X = np.asarray(getattr(data, "values", data), dtype=np.float64)
    n = X.shape[0]
    if not 1 <= q <= n:
        raise RankError(f"Rank must lie in [1, {n}], got {q}")

    rng = np.random.default_rng(seed)
    landmarks = np.sort(rng.choice(n, size=q, replace=False))
    W = evaluate_kernel(X[landmarks], descriptor)
    W = (W + W.T) / 2.0
    eigenvalues, eigenvectors = scipy.linalg.eigh(W)
    top = eigenvalues.max()
    keep = eigenvalues > EIGEN_CUTOFF * max(top, 0.0)
    if top <= 0 or not keep.any():
        raise KernelError(
            f"Landmark Gram of {descriptor.label} has no positive spectrum"
        )
    V = eigenvectors[:, keep]
    inv_sqrt = (V / np.sqrt(eigenvalues[keep])) @ V.T
    Z = evaluate_kernel(X, descriptor, X[landmarks]) @ inv_sqrt
    return FeatureMap(values=Z, descriptor=descriptor)


def normalized_map(
    X: FloatArray, descriptor: KernelDescriptor, q: int, seed: int
) -> tp.Optional[FeatureMap]:
    try:
        feature_map = nystrom_map(X, descriptor, q, seed)
    except KernelError as e:
        LOGGER.warning("Skipping base kernel: %s", e)
        return None
    Z = feature_map.values
    trace = float(np.einsum("ij,ij->", Z, Z))
    if not np.isfinite(trace) or trace <= 0:
        LOGGER.warning("Skipping base kernel %s: zero trace", descriptor.label)
        return None
    scale = Z.shape[0] / trace
    Z *= np.sqrt(scale)
    Z.setflags(write=False)
    return FeatureMap(values=Z, descriptor=descriptor, scale=scale)


def build_feature_maps(
    data: DataMatrix,
    grid: tp.Optional[BankGrid] = None,
    q: int = 150,
    seed: int = 0,
    workers: tp.Optional[int] = None,
    cache_dir: tp.Optional[str] = None,
) -> KernelBank:
    """Approximate bank: one Nystroem map per descriptor.

    Each map gets its own landmark seed derived from ``seed`` and is
    scaled so that its implied kernel has trace ``n``.
    """
    grid = grid or BankGrid()
    workers = workers or settings.BANK_WORKERS
    q = min(q, data.n)

    def build() -> KernelBank:
        plan = plan_bank(data, grid, seed)
        results = Parallel(n_jobs=workers)(
            delayed(normalized_map)(
                plan.view_of(d), d, q, derive_seed(seed, 1000 + index)
            )
            for index, d in enumerate(plan.descriptors)
        )
        return collect(plan, results, {**plan.metadata, "rank": q})

    bank = cached_bank(build, bank_fingerprint(data, grid, seed, q), cache_dir)
    LOGGER.info(
        "Built approximate kernel bank: p=%d n=%d q=%d", bank.p, bank.n, q
    )
    return bank


def combined_feature_map(
    maps: tp.Union[KernelBank, tp.Sequence[FeatureMap]], beta: BetaVector
) -> FeatureMap:
    """Concatenate ``sqrt(beta_i) Z_i`` over the nonzero weights."""
    maps = list(maps)
    beta.validate(len(maps))
    blocks = [np.sqrt(beta.weights[i]) * maps[i].values for i in beta.support]
    return FeatureMap(values=np.hstack(blocks))
