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

from kernelcsc.core.models import ConstraintSet, Partition
from kernelcsc.core.types import IntArray
from kernelcsc.services.optimizer.exceptions import EmptyConstraintSetError


def reward(
    partition: tp.Union[Partition, IntArray], cs: ConstraintSet
) -> float:
    """Weighted count of satisfied constraints over the number of pairs.

    The denominator is ``|M| + |C|`` even for non-unit weights.
    """
    if len(cs) == 0:
        raise EmptyConstraintSetError("Reward of an empty constraint set")
    labels = np.asarray(getattr(partition, "labels", partition))
    ml, cl = cs.ml_pairs, cs.cl_pairs
    satisfied = cs.ml_weights[labels[ml[:, 0]] == labels[ml[:, 1]]].sum()
    satisfied += cs.cl_weights[labels[cl[:, 0]] != labels[cl[:, 1]]].sum()
    return float(satisfied / len(cs))
