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
import typing as tp

import numpy as np

from kernelcsc.core.models import BetaVector
from kernelcsc.core.types import FloatArray
from kernelcsc.services.optimizer.surrogate import SurrogateModel


def ucb_index(mu: FloatArray, sigma: FloatArray, kappa: float) -> int:
    """Index maximizing ``mu + kappa * sigma``, earliest on ties."""
    return int(np.argmax(np.asarray(mu) + kappa * np.asarray(sigma)))


def ucb_select(
    surrogate: SurrogateModel,
    candidates: tp.Union[FloatArray, tp.Sequence[BetaVector]],
    kappa: float,
) -> BetaVector:
    if not isinstance(candidates, np.ndarray):
        candidates = np.vstack([c.weights for c in candidates])
    mu, sigma = surrogate.predict(candidates)
    return BetaVector(candidates[ucb_index(mu, sigma, kappa)])
