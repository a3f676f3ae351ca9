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
import yaml

FAST_OPTIMIZER = {
    "max_iters": 4,
    "warmup": 2,
    "candidate_pool": 16,
    "n_estimators": 10,
}
SMALL_BANK = {"factors": [1.0]}


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML config with a tiny bank and a short search."""

    def _write(name: str = "config.yaml", **payload):
        payload.setdefault("bank", SMALL_BANK)
        payload.setdefault("optimizer", FAST_OPTIMIZER)
        path = tmp_path / name
        path.write_text(yaml.safe_dump(payload))
        return path

    return _write


@pytest.fixture
def dataset_file(tmp_path):
    rng = np.random.default_rng(0)
    rows = ["a\tb\ttarget"]
    for label, center in enumerate([-4.0, 4.0]):
        for x, y in center + 0.5 * rng.standard_normal((20, 2)):
            rows.append(f"{float(x)!r}\t{float(y)!r}\t{label}")
    path = tmp_path / "blobs.tsv"
    path.write_text("\n".join(rows) + "\n")
    return path
