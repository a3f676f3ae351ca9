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
"""Synthetic labelled datasets for desk-scale experiments."""
import logging

import numpy as np
from sklearn.datasets import make_blobs, make_circles

from kernelcsc.core.enums import SyntheticSuite
from kernelcsc.core.models import DataMatrix
from kernelcsc.core.utils.hashing import derive_seed

LOGGER = logging.getLogger(__name__)

NOISE_DIMS = 5

# Shear applied to blobs of the anisotropic suite.
ANISOTROPIC_TRANSFORM = np.array([[0.6, -0.6], [-0.4, 0.8]])


def _random_state(seed: int, stream: int) -> int:
    return derive_seed(seed, stream) % (2**32)


def _noisy_blobs(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    # Three well separated blobs in two dimensions plus low-variance
    # noise columns that standardization inflates to the same scale.
    X, y = make_blobs(
        n_samples=n,
        n_features=2,
        centers=3,
        cluster_std=1.0,
        center_box=(-10.0, 10.0),
        random_state=_random_state(seed, 0),
    )
    rng = np.random.default_rng(derive_seed(seed, 1))
    noise = rng.normal(scale=0.5, size=(n, NOISE_DIMS))
    return np.hstack([X, noise]), y


def _rings(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    return make_circles(
        n_samples=n,
        factor=0.4,
        noise=0.05,
        random_state=_random_state(seed, 0),
    )


def _anisotropic(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    X, y = make_blobs(
        n_samples=n,
        n_features=2,
        centers=3,
        cluster_std=0.8,
        random_state=_random_state(seed, 0),
    )
    return X @ ANISOTROPIC_TRANSFORM, y


def _scaling(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    return make_blobs(
        n_samples=n,
        n_features=10,
        centers=5,
        cluster_std=1.5,
        random_state=_random_state(seed, 0),
    )


_GENERATORS = {
    SyntheticSuite.NOISY_BLOBS: _noisy_blobs,
    SyntheticSuite.RINGS: _rings,
    SyntheticSuite.ANISOTROPIC: _anisotropic,
    SyntheticSuite.SCALING: _scaling,
}


def make_suite(name: SyntheticSuite, n: int, seed: int = 0) -> DataMatrix:
    """Generate ``n`` labelled points of a synthetic suite."""
    suite = SyntheticSuite(name)
    X, y = _GENERATORS[suite](n, seed)
    LOGGER.debug("Generated %s suite: n=%d d=%d", suite, n, X.shape[1])
    return DataMatrix(
        values=X,
        labels=y,
        name=str(suite),
        columns=tuple(f"x{i}" for i in range(X.shape[1])),
    )
