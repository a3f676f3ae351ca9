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

from kernelcsc.core.models import (
    BetaVector,
    FeatureMap,
    GramMatrix,
    KernelBank,
)
from kernelcsc.services.cluster.exceptions import ClusterError
from kernelcsc.services.kernels.bank import combine

from .space import ClusterSpace, FeatureSpace, GramSpace


def new_cluster_space(
    kernel: tp.Union[GramMatrix, FeatureMap, ClusterSpace]
) -> ClusterSpace:
    """Cluster space factory."""
    if isinstance(kernel, ClusterSpace):
        return kernel
    if isinstance(kernel, GramMatrix):
        return GramSpace(kernel.values)
    if isinstance(kernel, FeatureMap):
        return FeatureSpace([kernel.values])
    raise ClusterError(
        f"Cannot cluster in the space of {type(kernel).__name__}"
    )


def combined_space(bank: KernelBank, beta: BetaVector) -> ClusterSpace:
    """Space of the combination kernel ``sum_i beta_i G_i``."""
    if not bank.approximate:
        return GramSpace(combine(bank, beta).values)
    beta.validate(bank.p)
    support = beta.support
    return FeatureSpace(
        [bank[i].values for i in support],
        np.asarray(beta.weights)[support],
    )
