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
"""Index arithmetic over unordered pairs ``i < j`` of ``n`` items.

Pairs are numbered row by row over the strict upper triangle:
``(0, 1), (0, 2), ..., (0, n-1), (1, 2), ...``.
"""
import numpy as np

from kernelcsc.core.types import IntArray


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def _row_starts(n: int) -> IntArray:
    rows = np.arange(n, dtype=np.int64)
    return rows * (2 * n - rows - 1) // 2


def decode_pairs(n: int, codes: np.ndarray) -> tuple[IntArray, IntArray]:
    """Map linear pair codes to ``(i, j)`` index arrays with ``i < j``."""
    codes = np.asarray(codes, dtype=np.int64)
    starts = _row_starts(n)
    rows = np.searchsorted(starts, codes, side="right") - 1
    cols = rows + 1 + (codes - starts[rows])
    return rows, cols


def sample_pairs(
    n: int, count: int, rng: np.random.Generator
) -> tuple[IntArray, IntArray]:
    """Draw ``count`` distinct pairs uniformly without replacement."""
    total = pair_count(n)
    count = min(count, total)
    codes = rng.choice(total, size=count, replace=False)
    return decode_pairs(n, codes)


def all_pairs(n: int) -> tuple[IntArray, IntArray]:
    rows, cols = np.triu_indices(n, k=1)
    return rows.astype(np.int64), cols.astype(np.int64)
