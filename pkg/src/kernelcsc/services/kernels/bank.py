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
"""Base-kernel bank construction and linear combination."""
import dataclasses
import logging
import typing as tp

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from django.conf import settings
from joblib import Parallel, delayed
from sklearn.metrics.pairwise import pairwise_kernels
from sklearn.preprocessing import StandardScaler

from kernelcsc.core.enums import KernelFamily, KernelView
from kernelcsc.core.models import (
    BankGrid,
    BetaVector,
    DataMatrix,
    GramMatrix,
    KernelBank,
    KernelDescriptor,
)
from kernelcsc.core.types import FloatArray, IntArray
from kernelcsc.core.utils.hashing import (
    array_fingerprint,
    canonical_json,
    derive_seed,
    sha256_hex,
)
from kernelcsc.services.kernels.cache import cached_bank
from kernelcsc.services.kernels.exceptions import KernelError
from kernelcsc.services.kernels.heuristics import Medians, median_heuristics

LOGGER = logging.getLogger(__name__)

POLYNOMIAL_DEGREES = (2, 3)

# Above this size the smallest eigenvalue is found iteratively.
DENSE_EIGEN_LIMIT = 2000

# Eigenvalues below this fraction of the largest one are dropped, both
# when repairing a Gram matrix and when inverting a landmark Gram.
EIGEN_CUTOFF = 1e-10


def standardize(values: FloatArray) -> tuple[FloatArray, IntArray]:
    """Zero-mean unit-variance columns over all rows.

    Constant columns are dropped; the kept column indices are returned
    alongside the matrix.
    """
    values = np.asarray(values, dtype=np.float64)
    kept = np.flatnonzero(np.ptp(values, axis=0) > 0).astype(np.int64)
    dropped = values.shape[1] - kept.size
    if dropped:
        LOGGER.warning(
            "Dropped %d constant column(s) from the standardized view",
            dropped,
        )
    if kept.size == 0:
        return np.zeros((values.shape[0], 0)), kept
    return StandardScaler().fit_transform(values[:, kept]), kept


def make_descriptors(
    medians: Medians,
    factors: tp.Sequence[float],
    view: KernelView = KernelView.RAW,
) -> list[KernelDescriptor]:
    """Descriptors of one view: rbf, laplace, polynomial, sigmoid, linear.

    Zero medians fall back to a unit scale.
    """
    width = medians.euclidean or 1.0
    manhattan = medians.manhattan or 1.0
    inner = abs(medians.inner) or 1.0

    descriptors = [
        KernelDescriptor.create(KernelFamily.RBF, view, (width * f,))
        for f in factors
    ]
    descriptors += [
        KernelDescriptor.create(KernelFamily.LAPLACE, view, (f / manhattan,))
        for f in factors
    ]
    descriptors += [
        KernelDescriptor.create(
            KernelFamily.POLYNOMIAL, view, (degree, medians.inner)
        )
        for degree in POLYNOMIAL_DEGREES
    ]
    descriptors += [
        KernelDescriptor.create(KernelFamily.SIGMOID, view, (f / inner, 0.0))
        for f in factors
    ]
    descriptors.append(KernelDescriptor.create(KernelFamily.LINEAR, view))
    return descriptors


def evaluate_kernel(
    X: FloatArray,
    descriptor: KernelDescriptor,
    Y: tp.Optional[FloatArray] = None,
) -> FloatArray:
    """Raw kernel values between the rows of ``X`` and ``Y``."""
    family = descriptor.family
    params = descriptor.params
    if family == KernelFamily.RBF:
        kwargs = {"metric": "rbf", "gamma": 1.0 / (2.0 * params[0] ** 2)}
    elif family == KernelFamily.LAPLACE:
        kwargs = {"metric": "laplacian", "gamma": params[0]}
    elif family == KernelFamily.POLYNOMIAL:
        kwargs = {
            "metric": "polynomial",
            "degree": int(params[0]),
            "gamma": 1.0,
            "coef0": params[1],
        }
    elif family == KernelFamily.SIGMOID:
        kwargs = {"metric": "sigmoid", "gamma": params[0], "coef0": params[1]}
    else:
        kwargs = {"metric": "linear"}
    return pairwise_kernels(X, Y, **kwargs)


def smallest_eigenvalue(K: FloatArray) -> float:
    n = K.shape[0]
    if n <= DENSE_EIGEN_LIMIT:
        return float(
            scipy.linalg.eigh(K, eigvals_only=True, subset_by_index=[0, 0])[0]
        )
    values = scipy.sparse.linalg.eigsh(
        K, k=1, which="SA", return_eigenvectors=False
    )
    return float(values[0])


def clip_spectrum(K: FloatArray) -> FloatArray:
    """Positive part of a symmetric matrix.

    Eigenvalues at or below ``EIGEN_CUTOFF`` times the largest are set
    to zero, which is the kernel a full-rank Nystroem map reproduces.
    """
    eigenvalues, eigenvectors = scipy.linalg.eigh(K)
    keep = eigenvalues > EIGEN_CUTOFF * max(eigenvalues.max(), 0.0)
    V = eigenvectors[:, keep]
    return (V * eigenvalues[keep]) @ V.T


def gram(X: FloatArray, descriptor: KernelDescriptor) -> GramMatrix:
    """Symmetrized, PSD-repaired Gram matrix with trace ``n``."""
    K = evaluate_kernel(np.asarray(X, dtype=np.float64), descriptor)
    K = (K + K.T) / 2.0
    n = K.shape[0]
    lowest = smallest_eigenvalue(K)
    if lowest < 0:
        K = clip_spectrum(K)
        LOGGER.debug(
            "Clipped negative spectrum of %s (smallest eigenvalue %.3g)",
            descriptor.label,
            lowest,
        )
    trace = float(np.trace(K))
    if not np.isfinite(trace) or trace <= 0:
        raise KernelError(f"Kernel {descriptor.label} has zero trace")
    scale = n / trace
    K *= scale
    K.setflags(write=False)
    return GramMatrix(values=K, descriptor=descriptor, scale=scale)


@dataclasses.dataclass(frozen=True)
class BankPlan:
    """Descriptors of a bank and the data view each one is computed on."""

    views: dict
    descriptors: list
    metadata: dict

    def view_of(self, descriptor: KernelDescriptor) -> FloatArray:
        return self.views[descriptor.view]


def plan_bank(data: DataMatrix, grid: BankGrid, seed: int = 0) -> BankPlan:
    views: dict[KernelView, FloatArray] = {}
    descriptors: list[KernelDescriptor] = []
    metadata: dict = {"medians": {}, "dropped_columns": [], "skipped": []}
    for index, view in enumerate(grid.views):
        view = KernelView(view)
        if view == KernelView.STANDARDIZED:
            X, kept = standardize(data.values)
            metadata["dropped_columns"] = sorted(
                set(range(data.d)) - set(kept.tolist())
            )
            if kept.size == 0:
                LOGGER.warning("No varying column; standardized view skipped")
                continue
        else:
            X = data.values
        medians = median_heuristics(
            X, grid.median_max_pairs, derive_seed(seed, index)
        )
        metadata["medians"][str(view)] = medians._asdict()
        views[view] = X
        descriptors += make_descriptors(medians, grid.factors, view)
    return BankPlan(views=views, descriptors=descriptors, metadata=metadata)


def bank_fingerprint(
    data: DataMatrix, grid: BankGrid, seed: int, rank: tp.Optional[int]
) -> str:
    """Identity of a bank: data, grid, seed and approximation rank."""
    payload = {
        "data": array_fingerprint(data.values),
        "grid": grid.dict(),
        "seed": seed,
        "rank": rank,
    }
    return sha256_hex(canonical_json(payload))


def _safe_gram(
    X: FloatArray, descriptor: KernelDescriptor
) -> tp.Optional[GramMatrix]:
    try:
        return gram(X, descriptor)
    except KernelError as e:
        LOGGER.warning("Skipping base kernel: %s", e)
        return None


def collect(
    plan: BankPlan, results: tp.Iterable, metadata: tp.Optional[dict] = None
) -> KernelBank:
    """Assemble a bank from per-descriptor results, skipping failures."""
    metadata = dict(plan.metadata if metadata is None else metadata)
    kernels = []
    skipped = []
    for descriptor, result in zip(plan.descriptors, results):
        if result is None:
            skipped.append(descriptor.label)
        else:
            kernels.append(result)
    metadata["skipped"] = skipped
    if not kernels:
        raise KernelError("Every base kernel is degenerate")
    return KernelBank(kernels=tuple(kernels), metadata=metadata)


def build_bank(
    data: DataMatrix,
    grid: tp.Optional[BankGrid] = None,
    seed: int = 0,
    workers: tp.Optional[int] = None,
    cache_dir: tp.Optional[str] = None,
) -> KernelBank:
    """Exact bank: one trace-normalized Gram matrix per descriptor."""
    grid = grid or BankGrid()
    workers = workers or settings.BANK_WORKERS

    def build() -> KernelBank:
        plan = plan_bank(data, grid, seed)
        results = Parallel(n_jobs=workers)(
            delayed(_safe_gram)(plan.view_of(d), d) for d in plan.descriptors
        )
        return collect(plan, results)

    bank = cached_bank(
        build, bank_fingerprint(data, grid, seed, None), cache_dir
    )
    LOGGER.info("Built exact kernel bank: p=%d n=%d", bank.p, bank.n)
    return bank


def combine(bank: KernelBank, beta: BetaVector) -> GramMatrix:
    """``K = sum_i beta_i G_i`` over the nonzero weights."""
    if bank.approximate:
        raise KernelError("Combine feature maps with combined_feature_map")
    beta.validate(bank.p)
    support = beta.support
    K = bank[support[0]].values * beta.weights[support[0]]
    for i in support[1:]:
        K = K + beta.weights[i] * bank[i].values
    return GramMatrix(values=K)
