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
"""Desk-scale benchmark runs comparing the learned kernel to baselines."""
import json

import numpy as np
import pandas as pd
import pytest
from django.core.management import call_command

from kernelcsc.core.enums import SyntheticSuite

pytestmark = pytest.mark.slow

SUITES = [
    {"suite": "noisy_blobs", "n": 300},
    {"suite": "rings", "n": 300},
    {"suite": "anisotropic", "n": 300},
]


@pytest.fixture(scope="module")
def bench_scores(tmp_path_factory):
    directory = tmp_path_factory.mktemp("acceptance")
    config = directory / "config.yaml"
    config.write_text(
        json.dumps(
            {
                "datasets": SUITES,
                "methods": [
                    "kernelcsc",
                    "kmeans",
                    "single-kernel",
                    "mahalanobis-csc",
                ],
                "trials": 10,
                "optimizer": {"max_iters": 100},
            }
        )
    )
    call_command("bench", config=str(config), out=str(directory / "out"))
    scores = pd.read_csv(directory / "out" / "scores.csv")
    return scores.pivot_table(
        index=["dataset", "trial"], columns="method", values="ari"
    )


def test_learned_kernel_beats_kmeans(bench_scores):
    means = bench_scores.groupby(level="dataset").mean()
    gains = means["kernelcsc"] - means["kmeans"]
    assert (gains >= 0.10).sum() >= 2


def test_learned_kernel_matches_single_kernel(bench_scores):
    means = bench_scores.groupby(level="dataset").mean()
    wins = (means["kernelcsc"] >= means["single-kernel"]).sum()
    assert wins > len(means) / 2


def test_mahalanobis_beats_kmeans_on_noisy_blobs(bench_scores):
    blobs = bench_scores.xs(str(SyntheticSuite.NOISY_BLOBS), level="dataset")
    wins = np.count_nonzero(blobs["mahalanobis-csc"] >= blobs["kmeans"])
    assert wins >= 8
