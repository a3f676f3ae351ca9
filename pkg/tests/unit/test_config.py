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
import hashlib

import pytest
import yaml

from kernelcsc.core.enums import FinalStep, SearchStrategy, SyntheticSuite
from kernelcsc.core.exceptions import ConfigError
from kernelcsc.core.models import BenchConfig, ExperimentConfig
from kernelcsc.core.utils.hashing import derive_seed, trial_seed
from kernelcsc.core.utils.pairs import all_pairs, decode_pairs, pair_count

SUITE = {"suite": "rings", "n": 40}


@pytest.fixture
def config_file(tmp_path):
    def _write(payload):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(payload))
        return path

    return _write


def test_load_with_overrides(config_file):
    path = config_file(
        {"dataset": SUITE, "optimizer": {"max_iters": 7}, "seed": 1}
    )

    config = ExperimentConfig.load(
        path,
        seed=9,
        out=None,
        approx_rank=20,
        strategy="random",
        final="constrained",
    )

    assert config.seed == 9
    assert config.out == "out"
    assert config.optimizer.max_iters == 7
    assert config.approximation.rank == 20
    assert config.approximation.enabled
    assert config.strategy == SearchStrategy.RANDOM
    assert config.final == FinalStep.CONSTRAINED
    assert config.dataset.suite == SyntheticSuite.RINGS
    assert config.dataset.label == "rings"


@pytest.mark.parametrize(
    "payload",
    [
        {"dataset": {**SUITE, "k": 0}},
        {"dataset": {"suite": "rings", "path": "x.tsv"}},
        {"dataset": {}},
        {"dataset": SUITE, "split": {"train_fraction": 1.5}},
        {"dataset": SUITE, "optimizer": {"sparsity": 0}},
        {"dataset": SUITE, "optimizer": {"kappa": -1}},
        {"dataset": SUITE, "approximation": {"rank": 0}},
        {"dataset": SUITE, "unknown": 1},
    ],
)
def test_invalid_config(payload):
    with pytest.raises(ConfigError):
        ExperimentConfig.build(payload)


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("dataset: [unclosed\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(bad)
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(listing)


def test_payload_round_trip():
    config = ExperimentConfig.build(
        {"dataset": SUITE, "optimizer": {"patience": 4}}, approx_rank=8
    )

    again = ExperimentConfig.build(config.to_payload())

    assert again == config
    assert again.config_hash() == config.config_hash()


def test_config_hash_ignores_output_location():
    first = ExperimentConfig.build({"dataset": SUITE}, out="a")
    second = ExperimentConfig.build({"dataset": SUITE}, out="b")
    reseeded = ExperimentConfig.build({"dataset": SUITE}, seed=5)

    assert first.config_hash() == second.config_hash()
    assert first.config_hash() != reseeded.config_hash()


def test_bench_config():
    config = BenchConfig.build(
        {
            "datasets": [SUITE, {"suite": "rings", "n": 60, "name": "big"}],
            "trials": 3,
            "pair_budgets": [10, 40],
        },
        workers=2,
    )

    cell = config.experiment(config.datasets[1], max_pairs=10)

    assert cell.split.max_pairs == 10
    assert config.split.max_pairs == 5000
    assert cell.dataset.label == "big"
    assert cell.seed == config.seed
    assert BenchConfig.build(
        {"datasets": [SUITE], "trials": 3}, workers=1
    ).config_hash() == BenchConfig.build(
        {"datasets": [SUITE], "trials": 3}, workers=4
    ).config_hash()


@pytest.mark.parametrize(
    "strategy, expected",
    [
        (None, SearchStrategy.RANDOM),
        (SearchStrategy.SMBO, SearchStrategy.SMBO),
    ],
)
def test_bench_cell_strategy(strategy, expected):
    config = BenchConfig.build(
        {"datasets": [SUITE], "trials": 2, "strategy": "random"}
    )

    cell = config.experiment(config.datasets[0], strategy=strategy)

    assert config.strategy == SearchStrategy.RANDOM
    assert cell.strategy == expected
    assert BenchConfig.build(
        {"datasets": [SUITE], "trials": 2}
    ).strategy == SearchStrategy.SMBO


@pytest.mark.parametrize(
    "payload",
    [
        {"datasets": []},
        {"datasets": [SUITE, SUITE]},
        {"datasets": [SUITE], "trials": 1},
        {"datasets": [SUITE], "methods": []},
        {"datasets": [SUITE], "pair_budgets": [0]},
        {"datasets": [SUITE], "methods": ["kmeans", "kmeans"]},
    ],
)
def test_invalid_bench_config(payload):
    with pytest.raises(ConfigError):
        BenchConfig.build(payload)


def test_trial_seed():
    digest = hashlib.sha256(b"iris:3").digest()
    expected = (7 ^ int.from_bytes(digest[:8], "big")) & ((1 << 63) - 1)

    assert trial_seed(7, "iris", 3) == expected
    assert trial_seed(7, "iris", 3) != trial_seed(7, "iris", 4)


def test_derive_seed():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert derive_seed(1, 2) != derive_seed(1, 3)
    assert 0 <= derive_seed(-5, 0) < 2**63


def test_decode_pairs_matches_enumeration():
    rows, cols = decode_pairs(6, range(pair_count(6)))
    expected_rows, expected_cols = all_pairs(6)

    assert rows.tolist() == expected_rows.tolist()
    assert cols.tolist() == expected_cols.tolist()
