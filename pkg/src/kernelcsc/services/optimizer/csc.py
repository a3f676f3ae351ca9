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
"""Constraint satisfaction clustering.

Searches combination weights for the kernel whose k-means partition
satisfies the most known constraints. Candidates come either from
uniform sampling of the search domain or from maximizing an upper
confidence bound of a random forest fit to the history.
"""
import dataclasses
import json
import logging
import typing as tp

import numpy as np
from django.conf import settings

from kernelcsc.core.enums import SearchStrategy
from kernelcsc.core.models import (
    BetaVector,
    ConstraintSet,
    DataMatrix,
    History,
    KernelBank,
    OptimizerConfig,
    Partition,
    SeedSet,
)
from kernelcsc.core.types import FloatArray, StrPath
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.services.cluster.factory import combined_space
from kernelcsc.services.cluster.kmeans import kmeans_in_space
from kernelcsc.services.cluster.mahalanobis import (
    diagonal_mahalanobis_kmeans,
    project,
)
from kernelcsc.services.cluster.seeding import farthest_first_init
from kernelcsc.services.cluster.space import ClusterSpace, FeatureSpace
from kernelcsc.services.dataio.constraints import connected_components
from kernelcsc.services.dataio.splits import subsample_unconstrained
from kernelcsc.services.kernels.support import bank_for_descriptors
from kernelcsc.services.optimizer.acquisition import ucb_index
from kernelcsc.services.optimizer.exceptions import EmptyConstraintSetError
from kernelcsc.services.optimizer.reward import reward
from kernelcsc.services.optimizer.sampling import (
    sample_dense_array,
    sample_sparse_array,
)
from kernelcsc.services.optimizer.surrogate import fit_surrogate

LOGGER = logging.getLogger(__name__)

# Random streams derived from the optimizer seed.
_PROPOSAL_STREAM = 0
_SURROGATE_STREAM = 1
_SEEDING_STREAM = 2

Sampler = tp.Callable[[int, np.random.Generator], FloatArray]
Evaluator = tp.Callable[[FloatArray, int], tuple[Partition, SeedSet]]


@dataclasses.dataclass
class CSCResult:
    partition: Partition
    beta: BetaVector
    reward: float
    history: History
    seeds: SeedSet
    descriptors: list = dataclasses.field(default_factory=list)

    @property
    def support_descriptors(self) -> list:
        if not self.descriptors:
            return []
        return [self.descriptors[i] for i in self.beta.support]


def best_of_restarts(
    space: ClusterSpace,
    components: tp.Sequence[tp.Sequence[int]],
    k: int,
    cfg: OptimizerConfig,
    seed: int,
) -> tuple[Partition, SeedSet]:
    """Kernel k-means from farthest-first seeds, best of the restarts.

    The lowest objective wins, the earliest restart on ties.
    """
    best = None
    for restart in range(cfg.restarts):
        seeds = farthest_first_init(components, space, k, restart, seed)
        partition = kmeans_in_space(space, seeds, k, cfg.kmeans_max_iter)
        if best is None or partition.objective < best[0].objective:
            best = (partition, seeds)
    return best


def _search(
    dim: int,
    sample: Sampler,
    evaluate: Evaluator,
    cs: ConstraintSet,
    cfg: OptimizerConfig,
    strategy: SearchStrategy,
) -> tuple[History, Partition, SeedSet]:
    if len(cs) == 0:
        raise EmptyConstraintSetError("No constraints to learn from")
    strategy = SearchStrategy(strategy)
    rng = np.random.default_rng(derive_seed(cfg.seed, _PROPOSAL_STREAM))
    history = History()
    best: tp.Optional[tuple[Partition, SeedSet]] = None
    stale = 0

    for it in range(cfg.max_iters):
        if strategy == SearchStrategy.RANDOM or it < max(cfg.warmup, 1):
            candidate = sample(1, rng)[0]
        else:
            surrogate = fit_surrogate(
                history,
                derive_seed(cfg.seed, _SURROGATE_STREAM, it),
                cfg.n_estimators,
            )
            pool = sample(cfg.candidate_pool, rng)
            mu, sigma = surrogate.predict(pool)
            candidate = pool[ucb_index(mu, sigma, cfg.kappa)]

        partition, seeds = evaluate(candidate, it)
        value = reward(partition, cs)
        if history.append(candidate, value):
            best = (partition, seeds)
            stale = 0
        else:
            stale += 1
        LOGGER.debug(
            "Iteration %d: reward %.4f (best %.4f, %d active)",
            it,
            value,
            history.best.reward,
            np.count_nonzero(candidate),
        )
        if cfg.patience is not None and stale >= cfg.patience:
            LOGGER.info(
                "No improvement in %d iterations; stopping at %d",
                cfg.patience,
                it + 1,
            )
            break

    return history, best[0], best[1]


def run_csc(
    bank: KernelBank,
    cs: ConstraintSet,
    k: int,
    cfg: tp.Optional[OptimizerConfig] = None,
    strategy: SearchStrategy = SearchStrategy.SMBO,
) -> CSCResult:
    """Learn sparse combination weights and the matching partition."""
    cfg = cfg or OptimizerConfig()
    components = connected_components(cs, bank.n)

    def sample(count, rng):
        return sample_sparse_array(bank.p, cfg.sparsity, count, rng)

    def evaluate(weights, it):
        beta = BetaVector(weights)
        beta.validate(bank.p, cfg.sparsity)
        space = combined_space(bank, beta)
        return best_of_restarts(
            space,
            components,
            k,
            cfg,
            derive_seed(cfg.seed, _SEEDING_STREAM, it),
        )

    history, partition, seeds = _search(
        bank.p, sample, evaluate, cs, cfg, strategy
    )
    result = CSCResult(
        partition=partition,
        beta=BetaVector(history.best.params),
        reward=history.best.reward,
        history=history,
        seeds=seeds,
        descriptors=bank.descriptors,
    )
    LOGGER.info(
        "Kernel search (%s) finished after %d iterations: reward %.4f "
        "with kernels %s",
        strategy,
        len(history),
        result.reward,
        result.beta.support.tolist(),
    )
    return result


def select_single_kernel(
    bank: KernelBank,
    cs: ConstraintSet,
    k: int,
    cfg: tp.Optional[OptimizerConfig] = None,
) -> CSCResult:
    """Pick the one base kernel whose partition has the best reward."""
    cfg = cfg or OptimizerConfig()
    if len(cs) == 0:
        raise EmptyConstraintSetError("No constraints to select with")
    components = connected_components(cs, bank.n)
    history = History()
    best = None
    for index in range(bank.p):
        beta = BetaVector.one_hot(bank.p, index)
        partition, seeds = best_of_restarts(
            combined_space(bank, beta),
            components,
            k,
            cfg,
            derive_seed(cfg.seed, _SEEDING_STREAM, index),
        )
        if history.append(beta.weights, reward(partition, cs)):
            best = (partition, seeds)
    LOGGER.info(
        "Selected base kernel %d with reward %.4f",
        history.best_index,
        history.best.reward,
    )
    return CSCResult(
        partition=best[0],
        beta=BetaVector(history.best.params),
        reward=history.best.reward,
        history=history,
        seeds=best[1],
        descriptors=bank.descriptors,
    )


def run_mahalanobis_csc(
    data: DataMatrix,
    cs: ConstraintSet,
    k: int,
    cfg: tp.Optional[OptimizerConfig] = None,
    strategy: SearchStrategy = SearchStrategy.SMBO,
) -> CSCResult:
    """Search dense diagonal metric weights instead of kernel weights."""
    cfg = cfg or OptimizerConfig()
    if data.d > settings.MAHALANOBIS_WARN_DIM:
        LOGGER.warning(
            "Searching %d metric weights without gradients may need many "
            "iterations",
            data.d,
        )
    components = connected_components(cs, data.n)

    def sample(count, rng):
        return sample_dense_array(data.d, count, rng)

    def evaluate(weights, it):
        space = FeatureSpace([project(data, weights)])
        seed = derive_seed(cfg.seed, _SEEDING_STREAM, it)
        best = None
        for restart in range(cfg.restarts):
            seeds = farthest_first_init(components, space, k, restart, seed)
            partition = diagonal_mahalanobis_kmeans(
                data, weights, seeds, k, cfg.kmeans_max_iter
            )
            if best is None or partition.objective < best[0].objective:
                best = (partition, seeds)
        return best

    history, partition, seeds = _search(
        data.d, sample, evaluate, cs, cfg, strategy
    )
    LOGGER.info(
        "Metric search finished after %d iterations: reward %.4f",
        len(history),
        history.best.reward,
    )
    return CSCResult(
        partition=partition,
        beta=BetaVector(history.best.params),
        reward=history.best.reward,
        history=history,
        seeds=seeds,
    )


def learn_on_subsample(
    data: DataMatrix,
    cs: ConstraintSet,
    k: int,
    cfg: OptimizerConfig,
    strategy: SearchStrategy,
    build: tp.Callable[[DataMatrix], KernelBank],
    rank: tp.Optional[int] = None,
) -> CSCResult:
    """Learn weights on a subsample, then cluster all rows with them.

    The subsample keeps every constrained point, so the constraints
    are only renumbered. The learned kernels are re-evaluated on the
    full data and clustered from farthest-first seeds.
    """
    rows = subsample_unconstrained(data.n, cs, cfg.learn_subsample, cfg.seed)
    mapping = {int(row): index for index, row in enumerate(rows)}
    LOGGER.info("Learning kernel weights on %d of %d rows", rows.size, data.n)
    bank = build(data.subset(rows))
    learned = run_csc(bank, cs.reindex(mapping), k, cfg, strategy)

    support = learned.beta.support
    full_bank = bank_for_descriptors(
        data, learned.support_descriptors, rank, cfg.seed, support
    )
    weights = BetaVector(learned.beta.weights[support])
    partition, seeds = best_of_restarts(
        combined_space(full_bank, weights),
        connected_components(cs, data.n),
        k,
        cfg,
        derive_seed(cfg.seed, _SEEDING_STREAM, len(learned.history)),
    )
    return dataclasses.replace(
        learned,
        partition=partition,
        seeds=seeds,
        reward=reward(partition, cs),
    )


def export_best_model(
    result: CSCResult, path: StrPath, meta: tp.Optional[dict] = None
) -> None:
    """Write the learned weights, kernels, seeds and labels as JSON."""
    support = result.beta.support
    payload = {
        "beta": result.beta.weights.tolist(),
        "support": support.tolist(),
        "kernels": [
            json.loads(d.json()) if d is not None else None
            for d in result.support_descriptors
        ],
        "seeds": [list(center) for center in result.seeds],
        "labels": result.partition.labels.tolist(),
        "reward": result.reward,
        "objective": result.partition.objective,
        **(meta or {}),
    }
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
