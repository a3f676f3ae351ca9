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
import itertools
import json

import numpy as np
import pytest
from scipy.stats import spearmanr

from kernelcsc.core.enums import KernelFamily, SearchStrategy
from kernelcsc.core.models import (
    BankGrid,
    ConstraintSet,
    DataMatrix,
    GramMatrix,
    History,
    KernelBank,
    KernelDescriptor,
    OptimizerConfig,
    SplitSpec,
)
from kernelcsc.services.cluster.kmeans import kmeans_in_space
from kernelcsc.services.cluster.seeding import farthest_first_init
from kernelcsc.services.cluster.space import GramSpace
from kernelcsc.services.dataio.constraints import connected_components
from kernelcsc.services.dataio.splits import sample_constraints
from kernelcsc.services.kernels.bank import build_bank, gram
from kernelcsc.services.optimizer.acquisition import ucb_index, ucb_select
from kernelcsc.services.optimizer.csc import (
    export_best_model,
    learn_on_subsample,
    run_csc,
    run_mahalanobis_csc,
    select_single_kernel,
)
from kernelcsc.services.optimizer.exceptions import (
    EmptyConstraintSetError,
    EmptyHistoryError,
)
from kernelcsc.services.optimizer.reward import reward
from kernelcsc.services.optimizer.sampling import (
    sample_dense_array,
    sample_sparse,
    sample_sparse_array,
)
from kernelcsc.services.optimizer.surrogate import fit_surrogate
from tests.conftest import two_blobs

FAST = {"candidate_pool": 64, "n_estimators": 20, "warmup": 5}


def _constraints(data: DataMatrix, seed: int = 0) -> ConstraintSet:
    labelled = data.with_train_mask(np.ones(data.n, dtype=bool))
    return sample_constraints(
        labelled, SplitSpec(pair_fraction=0.2, seed=seed)
    )


def _rbf_bank(data: DataMatrix, degenerate: bool = False) -> KernelBank:
    rbf = KernelDescriptor.create(KernelFamily.RBF, params=(2.0,))
    kernels = [gram(data.values, rbf)]
    if degenerate:
        kernels.append(GramMatrix(np.eye(data.n)))
    return KernelBank(kernels=tuple(kernels))


@pytest.mark.parametrize(
    "labels,expected",
    [([0, 0, 1], 1.0), ([0, 1, 1], 0.0)],
)
def test_reward_simple(labels, expected):
    cs = ConstraintSet.from_pairs(must_link=[(0, 1)], cannot_link=[(0, 2)])
    assert reward(np.array(labels), cs) == expected


def test_reward_partial():
    cs = ConstraintSet.from_pairs(
        must_link=[(0, 1), (1, 2)], cannot_link=[(0, 3)]
    )
    assert reward(np.array([0, 0, 1, 1]), cs) == pytest.approx(2 / 3)


def test_reward_uses_pair_count_denominator():
    cs = ConstraintSet.from_pairs(
        must_link=[(0, 1, 0.5)], cannot_link=[(0, 2)]
    )
    assert reward(np.array([0, 0, 1]), cs) == pytest.approx(0.75)


def test_reward_empty():
    with pytest.raises(EmptyConstraintSetError):
        reward(np.array([0, 1]), ConstraintSet.empty())


def test_sample_sparse_one_hot():
    for beta in sample_sparse(p=6, c=1, count=50, seed=0):
        assert beta.nnz == 1


def test_sample_sparse_bounds():
    rng = np.random.default_rng(1)
    candidates = sample_sparse_array(10, 5, 1000, rng)

    nnz = np.count_nonzero(candidates, axis=1)
    assert nnz.min() >= 1
    assert nnz.max() <= 5
    assert candidates.min() >= 0.0
    assert candidates.max() <= 1.0


def test_sample_sparse_covers_every_support():
    rng = np.random.default_rng(2)
    candidates = sample_sparse_array(3, 3, 10_000, rng)

    supports = {tuple(np.flatnonzero(row)) for row in candidates}

    expected = {
        s for r in (1, 2, 3) for s in itertools.combinations(range(3), r)
    }
    assert supports == expected


def test_sample_dense():
    values = sample_dense_array(4, 100, np.random.default_rng(3))
    assert values.shape == (100, 4)
    assert values.min() > 0.0
    assert values.max() <= 1.0


def test_ucb_index():
    mu = np.array([0.2, 0.7, 0.5])
    assert ucb_index(mu, np.array([0.9, 0.0, 0.1]), kappa=0.0) == 1
    assert ucb_index(mu, np.full(3, 0.3), kappa=2.0) == 1
    assert ucb_index(np.array([0.5, 0.4]), np.array([0.0, 0.2]), 1.0) == 1


def test_surrogate_single_entry():
    history = History()
    history.append(np.array([0.5, 0.0]), 0.8)

    mu, sigma = fit_surrogate(history, n_estimators=10).predict(
        np.random.default_rng(0).random((5, 2))
    )

    np.testing.assert_allclose(mu, 0.8)
    np.testing.assert_allclose(sigma, 0.0)


def test_surrogate_constant_rewards():
    history = History()
    for row in np.random.default_rng(1).random((8, 3)):
        history.append(row, 0.6)

    _, sigma = fit_surrogate(history, n_estimators=10).predict(
        np.random.default_rng(2).random((20, 3))
    )

    np.testing.assert_allclose(sigma, 0.0)


def test_surrogate_tracks_reward():
    rng = np.random.default_rng(3)
    history = History()
    for row in rng.random((80, 3)):
        history.append(row, row[0])
    grid = rng.random((50, 3))

    mu, _ = fit_surrogate(history, seed=4, n_estimators=30).predict(grid)

    assert spearmanr(mu, grid[:, 0]).correlation > 0.8


def test_surrogate_needs_history():
    with pytest.raises(EmptyHistoryError):
        fit_surrogate(History())


def test_ucb_select_returns_candidate():
    history = History()
    history.append(np.array([1.0, 0.0]), 1.0)
    history.append(np.array([0.0, 1.0]), 0.0)
    surrogate = fit_surrogate(history, n_estimators=10)
    candidates = np.array([[0.0, 1.0], [1.0, 0.0]])

    chosen = ucb_select(surrogate, candidates, kappa=0.0)

    assert chosen.weights.tolist() in candidates.tolist()


def test_history_earliest_best():
    history = History()
    assert history.append(np.array([0.1]), 0.5)
    assert not history.append(np.array([0.2]), 0.5)
    assert history.append(np.array([0.3]), 0.9)
    assert history.best_index == 2
    np.testing.assert_array_equal(history.best_so_far(), [0.5, 0.5, 0.9])
    frame = history.to_frame()
    assert frame["beta_support"].tolist() == ["0", "0", "0"]


def test_run_csc_single_kernel_bank():
    data = two_blobs(seed=10)
    bank = _rbf_bank(data)
    cs = _constraints(data)
    cfg = OptimizerConfig(max_iters=6, seed=1, **FAST)

    result = run_csc(bank, cs, 2, cfg)

    assert result.beta.support.tolist() == [0]
    space = GramSpace(bank[0].values)
    seeds = farthest_first_init(connected_components(cs, data.n), space, 2)
    expected = reward(kmeans_in_space(space, seeds, 2), cs)
    assert result.reward == pytest.approx(expected)
    assert len(result.history) == 6


def test_run_csc_finds_informative_kernel():
    data = two_blobs(seed=11)
    bank = _rbf_bank(data, degenerate=True)
    cs = ConstraintSet.from_pairs(
        must_link=[(i, i + 1) for i in (0, 1, 2, 3, 10, 11, 12, 13)],
        cannot_link=[(0, 10), (5, 15)],
    )
    cfg = OptimizerConfig(max_iters=20, seed=3, **FAST)

    result = run_csc(bank, cs, 2, cfg)

    assert result.reward == 1.0
    assert 0 in result.beta.support.tolist()
    assert result.reward == result.history.rewards.max()


@pytest.mark.parametrize(
    "strategy", [SearchStrategy.SMBO, SearchStrategy.RANDOM]
)
def test_run_csc_is_deterministic(strategy):
    data = two_blobs(noise_dims=1, seed=12)
    bank = build_bank(data, BankGrid(factors=[0.5, 2.0]))
    cs = _constraints(data, seed=4)
    cfg = OptimizerConfig(max_iters=8, sparsity=3, seed=5, **FAST)

    first = run_csc(bank, cs, 2, cfg, strategy)
    second = run_csc(bank, cs, 2, cfg, strategy)

    assert first.history == second.history
    np.testing.assert_array_equal(
        first.partition.labels, second.partition.labels
    )
    assert np.count_nonzero(first.history.params, axis=1).max() <= 3


def test_run_csc_patience():
    data = two_blobs(seed=13)
    cfg = OptimizerConfig(max_iters=30, patience=3, **FAST)

    result = run_csc(_rbf_bank(data), _constraints(data), 2, cfg)

    assert len(result.history) == 4


def test_run_csc_without_constraints():
    data = two_blobs(seed=14)
    with pytest.raises(EmptyConstraintSetError):
        run_csc(_rbf_bank(data), ConstraintSet.empty(), 2)


def test_select_single_kernel():
    data = two_blobs(seed=15)
    bank = _rbf_bank(data, degenerate=True)
    cs = _constraints(data, seed=6)

    result = select_single_kernel(bank, cs, 2, OptimizerConfig(**FAST))

    assert len(result.history) == 2
    assert result.reward == result.history.rewards.max()
    assert result.beta.nnz == 1
    assert result.history.best_index == int(np.argmax(result.history.rewards))


def test_mahalanobis_one_dimension_is_scale_free():
    data = DataMatrix(
        values=np.r_[np.arange(5.0), np.arange(5.0) + 20][:, None],
        labels=[0] * 5 + [1] * 5,
    )
    cfg = OptimizerConfig(max_iters=6, **FAST)

    result = run_mahalanobis_csc(data, _constraints(data), 2, cfg)

    assert len(set(result.history.rewards.tolist())) == 1


def test_mahalanobis_search_dominates_history():
    data = two_blobs(noise_dims=1, seed=16)
    cfg = OptimizerConfig(max_iters=10, seed=7, **FAST)

    result = run_mahalanobis_csc(data, _constraints(data, seed=8), 2, cfg)

    assert result.reward == result.history.rewards.max()
    assert result.beta.weights.shape == (3,)
    again = run_mahalanobis_csc(data, _constraints(data, seed=8), 2, cfg)
    assert again.history == result.history


def test_learn_on_subsample():
    data = two_blobs(n_per_class=20, seed=17)
    cs = ConstraintSet.from_pairs(
        must_link=[(0, 1), (21, 22)], cannot_link=[(0, 21), (2, 30)]
    )
    cfg = OptimizerConfig(max_iters=5, learn_subsample=12, **FAST)

    result = learn_on_subsample(
        data,
        cs,
        2,
        cfg,
        SearchStrategy.SMBO,
        lambda d: build_bank(d, BankGrid(factors=[1.0])),
    )

    assert result.partition.n == data.n
    assert result.reward == reward(result.partition, cs)
    assert len(result.support_descriptors) == result.beta.nnz


def test_export_best_model(tmp_path):
    data = two_blobs(seed=18)
    bank = build_bank(data, BankGrid(factors=[1.0]))
    result = run_csc(
        bank, _constraints(data), 2, OptimizerConfig(max_iters=3, **FAST)
    )
    path = tmp_path / "model.json"

    export_best_model(result, path, {"config_hash": "abc", "seed": 0})

    model = json.loads(path.read_text())
    assert model["support"] == result.beta.support.tolist()
    assert len(model["kernels"]) == len(model["support"])
    assert model["labels"] == result.partition.labels.tolist()
    assert model["config_hash"] == "abc"
