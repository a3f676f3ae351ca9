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
import numpy as np
import pytest

from kernelcsc.core.models import DataMatrix


def two_blobs(n_per_class: int = 10, noise_dims: int = 0, seed: int = 0):
    """Two tight blobs far apart along the first coordinate."""
    rng = np.random.default_rng(seed)
    centers = np.array([[-5.0, 0.0], [5.0, 0.0]])
    values = np.vstack(
        [c + 0.3 * rng.standard_normal((n_per_class, 2)) for c in centers]
    )
    if noise_dims:
        noise = rng.standard_normal((values.shape[0], noise_dims))
        values = np.hstack([values, noise])
    labels = np.repeat([0, 1], n_per_class)
    return DataMatrix(values=values, labels=labels, name="blobs")


@pytest.fixture
def blobs():
    return two_blobs()


@pytest.fixture
def write_table(tmp_path):
    def _write(text: str, name: str = "data.tsv"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
