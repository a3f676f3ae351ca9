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
"""Random forest surrogate of the reward over candidate weights."""
import typing as tp

import numpy as np
from django.conf import settings
from sklearn.ensemble import RandomForestRegressor

from kernelcsc.core.models import History
from kernelcsc.core.types import FloatArray
from kernelcsc.services.optimizer.exceptions import EmptyHistoryError


class SurrogateModel:
    """Tree ensemble exposing the mean and spread of tree predictions."""

    def __init__(self, forest: RandomForestRegressor):
        self.forest = forest

    def predict(self, X: FloatArray) -> tuple[FloatArray, FloatArray]:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        per_tree = np.stack(
            [tree.predict(X) for tree in self.forest.estimators_]
        )
        return per_tree.mean(axis=0), per_tree.std(axis=0)


def fit_surrogate(
    history: History,
    seed: int = 0,
    n_estimators: tp.Optional[int] = None,
) -> SurrogateModel:
    """Fit fully grown, bootstrapped regression trees to the history."""
    if len(history) == 0:
        raise EmptyHistoryError("Cannot fit a surrogate to no history")
    forest = RandomForestRegressor(
        n_estimators=n_estimators or settings.SURROGATE_N_ESTIMATORS,
        max_depth=None,
        bootstrap=True,
        random_state=seed % (2**32),
    )
    forest.fit(history.params, history.rewards)
    return SurrogateModel(forest)
