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
from sklearn.metrics import adjusted_rand_score
from sklearn.preprocessing import StandardScaler

from kernelcsc.core.enums import KernelFamily
from kernelcsc.core.models import (
    BetaVector,
    ConstraintSet,
    DataMatrix,
    FeatureMap,
    GramMatrix,
    KernelBank,
    KernelDescriptor,
    Partition,
    SeedSet,
)
from kernelcsc.services.cluster.constrained import (
    constrained_kernel_kmeans,
    constraint_penalty,
)
from kernelcsc.services.cluster.exceptions import (
    ClusterError,
    InvalidSeedsError,
    InvalidWeightsError,
    TooManyClustersError,
)
from kernelcsc.services.cluster.factory import (
    combined_space,
    new_cluster_space,
)
from kernelcsc.services.cluster.kmeans import (
    feature_map_kmeans,
    kernel_distance,
    kernel_kmeans,
    repair_empty,
)
from kernelcsc.services.cluster.mahalanobis import (
    diagonal_mahalanobis_kmeans,
    lloyd_kmeans,
)
from kernelcsc.services.cluster.output import load_partition, save_partition
from kernelcsc.services.cluster.seeding import farthest_first_init
from kernelcsc.services.cluster.space import FeatureSpace, GramSpace
from kernelcsc.services.kernels.bank import evaluate_kernel
from kernelcsc.services.kernels.nystrom import nystrom_map
from tests.conftest import two_blobs


def _linear(X):
    X = np.asarray(X, dtype=np.float64)
    return X @ X.T


def _seeds(*centers):
    return SeedSet(centers=tuple(tuple(c) for c in centers))


def test_kernel_distance_identity():
    K = np.eye(3)
    assert kernel_distance(K, 0, [0]) == 0.0
    assert kernel_distance(K, 0, [1]) == pytest.approx(2.0)


def test_kernel_distance_linear_is_euclidean():
    X = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 3.0], [4.0, 1.0]])
    cluster = [1, 2, 3]

    distance = kernel_distance(_linear(X), 0, cluster)

    expected = np.sum((X[0] - X[cluster].mean(axis=0)) ** 2)
    assert distance == pytest.approx(expected)


def test_feature_space_matches_gram_space():
    rng = np.random.default_rng(0)
    blocks = [rng.standard_normal((8, 3)), rng.standard_normal((8, 2))]
    weights = [0.4, 0.9]
    K = sum(w * Z @ Z.T for Z, w in zip(blocks, weights))
    labels = np.array([0, 1, 2, 0, 1, 2, 0, 1])

    exact, mapped = GramSpace(K), FeatureSpace(blocks, weights)

    np.testing.assert_allclose(
        mapped.distances(labels, 3), exact.distances(labels, 3), atol=1e-10
    )
    assert mapped.objective(labels, 3) == pytest.approx(
        exact.objective(labels, 3)
    )
    assert mapped.d_max() == pytest.approx(exact.d_max())
    i, j = np.array([0, 2]), np.array([5, 7])
    np.testing.assert_allclose(
        mapped.pair_distances(i, j), exact.pair_distances(i, j)
    )


def test_new_cluster_space():
    assert isinstance(new_cluster_space(GramMatrix(np.eye(2))), GramSpace)
    assert isinstance(new_cluster_space(FeatureMap(np.eye(2))), FeatureSpace)
    with pytest.raises(ClusterError):
        new_cluster_space(np.eye(2))


def test_combined_space_of_feature_maps():
    rng = np.random.default_rng(1)
    maps = tuple(FeatureMap(rng.standard_normal((5, 2))) for _ in range(3))
    bank = KernelBank(kernels=maps)
    beta = BetaVector([0.5, 0.0, 0.25])

    space = combined_space(bank, beta)

    assert isinstance(space, FeatureSpace)
    assert len(space.blocks) == 2
    K = 0.5 * maps[0].implied_kernel() + 0.25 * maps[2].implied_kernel()
    np.testing.assert_allclose(space.diag(), np.diag(K))


def test_seeding_from_components():
    space = GramSpace(np.eye(5))

    seeds = farthest_first_init([(0, 1, 2), (3, 4)], space, k=2)

    assert seeds.centers == ((0, 1, 2), (3, 4))


def test_seeding_identity_tie_rule():
    seeds = farthest_first_init([(0,), (1,), (2,)], GramSpace(np.eye(3)), 2)

    assert seeds.centers == ((0,), (1,))


def test_seeding_matches_exhaustive_search():
    X = np.arange(6.0).reshape(-1, 1)
    space = GramSpace(_linear(X))

    seeds = farthest_first_init([(0, 1), (2,), (3,), (4,), (5,)], space, 3)

    def worst_gap(points):
        centers = [X[[0, 1]].mean()] + [X[p, 0] for p in points]
        return min(
            (a - b) ** 2 for a, b in itertools.combinations(centers, 2)
        )

    best = max(itertools.combinations(range(2, 6), 2), key=worst_gap)
    assert seeds.centers[0] == (0, 1)
    assert sorted(c[0] for c in seeds.centers[1:]) == list(best)


def test_seeding_restart_is_seeded():
    space = GramSpace(_linear(np.arange(10.0).reshape(-1, 1)))
    singletons = [(i,) for i in range(10)]

    first = farthest_first_init(singletons, space, 3, restart=2, seed=7)
    again = farthest_first_init(singletons, space, 3, restart=2, seed=7)

    assert first == again
    assert len({c[0] for c in first.centers}) == 3


def test_seeding_too_many_clusters():
    space = GramSpace(np.ones((3, 3)))
    with pytest.raises(TooManyClustersError):
        farthest_first_init([(0,), (1,), (2,)], space, 2)
    with pytest.raises(TooManyClustersError):
        farthest_first_init([], GramSpace(np.eye(2)), 3)


def test_seed_set_invariants():
    with pytest.raises(InvalidSeedsError):
        SeedSet(centers=((0, 1), (1, 2)))
    with pytest.raises(InvalidSeedsError):
        SeedSet(centers=((),))
    with pytest.raises(InvalidSeedsError):
        SeedSet(centers=((5,),)).check(3)


def test_kernel_kmeans_singletons():
    partition = kernel_kmeans(np.eye(2), _seeds([0], [1]), 2)

    assert partition.labels.tolist() == [0, 1]
    assert partition.objective == pytest.approx(0.0)


def test_kernel_kmeans_single_cluster():
    partition = kernel_kmeans(np.eye(4), _seeds([0]), 1)

    assert partition.labels.tolist() == [0, 0, 0, 0]
    assert partition.objective == pytest.approx(3.0)


def test_linear_kernel_kmeans_matches_lloyd():
    data = two_blobs(n_per_class=15, noise_dims=2, seed=3)
    X = StandardScaler().fit_transform(data.values)
    seeds = _seeds([0, 1], [29])

    kernel = kernel_kmeans(_linear(X), seeds, 2)
    lloyd = lloyd_kmeans(X, seeds, 2)

    np.testing.assert_array_equal(kernel.labels, lloyd.labels)
    assert kernel.objective == pytest.approx(lloyd.objective)
    assert all(a >= b - 1e-9 for a, b in zip(kernel.trace, kernel.trace[1:]))


def test_feature_map_kmeans_identity_map():
    seeds = _seeds([0], [3])
    mapped = feature_map_kmeans(np.eye(5), seeds, 2)
    exact = kernel_kmeans(np.eye(5), seeds, 2)
    np.testing.assert_array_equal(mapped.labels, exact.labels)
    assert mapped.objective == pytest.approx(exact.objective)


def test_feature_map_kmeans_objective_matches_gram():
    Z = np.random.default_rng(2).standard_normal((12, 3))

    partition = feature_map_kmeans(Z, _seeds([0], [1], [2]), 3)

    exact = GramSpace(Z @ Z.T).objective(partition.labels, 3)
    assert partition.objective == pytest.approx(exact, abs=1e-8)


def test_full_rank_map_matches_exact_path():
    data = two_blobs(n_per_class=8, seed=4)
    rbf = KernelDescriptor.create(KernelFamily.RBF, params=(3.0,))
    seeds = _seeds([0], [15])

    exact = kernel_kmeans(evaluate_kernel(data.values, rbf), seeds, 2)
    mapped = feature_map_kmeans(
        nystrom_map(data, rbf, q=data.n, seed=0), seeds, 2
    )

    np.testing.assert_array_equal(mapped.labels, exact.labels)


def test_repair_empty_moves_farthest_point():
    labels = np.array([0, 0, 0, 1])
    D = np.array([[0.1, 5], [0.3, 5], [0.2, 5], [5, 0.0]])

    repaired = repair_empty(labels, D, 3)

    assert repaired.tolist() == [0, 2, 0, 1]


def test_constraint_penalty_identity():
    space = GramSpace(np.eye(3))
    cs = ConstraintSet.from_pairs(must_link=[(0, 1)], cannot_link=[(0, 2)])

    assert space.d_max() == pytest.approx(2.0)
    assert constraint_penalty(space, np.array([0, 0, 1]), cs, 2.0) == 0.0
    cl_only = ConstraintSet.from_pairs(cannot_link=[(0, 2)])
    assert constraint_penalty(
        space, np.array([0, 0, 0]), cl_only, 2.0
    ) == pytest.approx(2.0)
    ml_only = ConstraintSet.from_pairs(must_link=[(0, 1)])
    assert constraint_penalty(
        space, np.array([0, 1, 1]), ml_only, 2.0
    ) == pytest.approx(0.0)


def test_constrained_without_constraints_is_kernel_kmeans():
    data = two_blobs(n_per_class=10, noise_dims=1, seed=5)
    K = _linear(data.values)
    seeds = _seeds([0], [19])

    plain = kernel_kmeans(K, seeds, 2)
    constrained = constrained_kernel_kmeans(K, ConstraintSet.empty(), seeds, 2)

    np.testing.assert_array_equal(constrained.labels, plain.labels)
    assert constrained.objective == pytest.approx(plain.objective)


def test_constrained_kmeans_separates_cannot_link():
    X = np.array([[0.0], [1.0], [2.0], [10.0], [11.0], [12.0]])
    K = _linear(X)
    seeds = _seeds([0], [5])
    cs = ConstraintSet.from_pairs(cannot_link=[(0, 1, 200.0)])

    plain = kernel_kmeans(K, seeds, 2)
    constrained = constrained_kernel_kmeans(K, cs, seeds, 2, seed=3)

    assert plain.labels[0] == plain.labels[1]
    assert constrained.labels[0] != constrained.labels[1]
    trace = constrained.trace
    assert all(a >= b - 1e-9 for a, b in zip(trace, trace[1:]))


def test_mahalanobis_unit_weights_is_standardized_lloyd():
    data = two_blobs(n_per_class=10, noise_dims=1, seed=6)
    seeds = _seeds([0], [19])

    weighted = diagonal_mahalanobis_kmeans(data, np.ones(3), seeds, 2)
    lloyd = lloyd_kmeans(
        StandardScaler().fit_transform(data.values), seeds, 2
    )

    np.testing.assert_array_equal(weighted.labels, lloyd.labels)


def test_mahalanobis_drops_noise_column():
    rng = np.random.default_rng(7)
    signal = np.repeat([-1.0, 1.0], 20) + 0.05 * rng.standard_normal(40)
    noise = 10.0 * rng.standard_normal(40)
    data = DataMatrix(
        values=np.column_stack([signal, noise]),
        labels=np.repeat([0, 1], 20),
    )

    partition = diagonal_mahalanobis_kmeans(
        data, np.array([1.0, 0.0]), _seeds([0], [39]), 2
    )

    assert adjusted_rand_score(data.labels, partition.labels) == 1.0


def test_mahalanobis_single_column():
    data = two_blobs(n_per_class=10, noise_dims=2, seed=8)
    seeds = _seeds([0], [19])

    weighted = diagonal_mahalanobis_kmeans(
        data, np.array([0.0, 0.0, 0.7]), seeds, 2
    )
    column = StandardScaler().fit_transform(data.values)[:, [2]]
    lloyd = lloyd_kmeans(column, seeds, 2)

    np.testing.assert_array_equal(weighted.labels, lloyd.labels)


@pytest.mark.parametrize("w", [[0.0, 0.0], [1.0, -1.0], [1.0]])
def test_mahalanobis_invalid_weights(blobs, w):
    with pytest.raises(InvalidWeightsError):
        diagonal_mahalanobis_kmeans(blobs, np.array(w), _seeds([0], [1]), 2)


def test_partition_files(tmp_path):
    partition = Partition(labels=[1, 0, 1], k=2, objective=0.5, iterations=2)
    path = tmp_path / "partition.csv"

    save_partition(partition, path, {"config_hash": "abc", "seed": 3})

    assert load_partition(path).tolist() == [1, 0, 1]
    lines = path.read_text().splitlines()
    assert lines[0] == "row_index,cluster_label,config_hash,seed"
    record = json.loads(path.with_suffix(".json").read_text())
    assert record == {
        "config_hash": "abc",
        "iterations": 2,
        "k": 2,
        "objective": 0.5,
        "seed": 3,
    }


def test_load_partition_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("row_index,cluster_label\n0,1\n2,0\n")
    with pytest.raises(ClusterError):
        load_partition(path)
    with pytest.raises(ClusterError):
        load_partition(tmp_path / "missing.csv")
