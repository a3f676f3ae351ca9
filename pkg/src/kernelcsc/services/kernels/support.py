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
"""Re-evaluating selected base kernels on another set of rows."""
import typing as tp

from kernelcsc.core.enums import KernelView
from kernelcsc.core.models import DataMatrix, KernelBank, KernelDescriptor
from kernelcsc.core.utils.hashing import derive_seed
from kernelcsc.services.kernels.bank import gram, standardize
from kernelcsc.services.kernels.exceptions import KernelError
from kernelcsc.services.kernels.nystrom import normalized_map


def bank_for_descriptors(
    data: DataMatrix,
    descriptors: tp.Sequence[KernelDescriptor],
    rank: tp.Optional[int] = None,
    seed: int = 0,
    indices: tp.Optional[tp.Sequence[int]] = None,
) -> KernelBank:
    """Evaluate ``descriptors`` (in order) on ``data``.

    Used to carry weights learned on a subsample over to the full
    data. Exact Gram matrices when ``rank`` is ``None``, Nystroem maps
    otherwise. ``indices`` are the positions of the descriptors in the
    bank they came from; landmark seeds follow them, as in
    ``build_feature_maps``.
    """
    if indices is None:
        indices = range(len(descriptors))
    if len(indices) != len(descriptors):
        raise KernelError("Need one bank index per descriptor")
    views = {KernelView.RAW: data.values}
    if any(d.view == KernelView.STANDARDIZED for d in descriptors):
        views[KernelView.STANDARDIZED] = standardize(data.values)[0]

    kernels = []
    for index, descriptor in zip(indices, descriptors):
        X = views[descriptor.view]
        if rank is None:
            kernels.append(gram(X, descriptor))
            continue
        feature_map = normalized_map(
            X,
            descriptor,
            min(rank, data.n),
            derive_seed(seed, 1000 + int(index)),
        )
        if feature_map is None:
            raise KernelError(f"Kernel {descriptor.label} is degenerate")
        kernels.append(feature_map)
    return KernelBank(kernels=tuple(kernels))
