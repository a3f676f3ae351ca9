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
"""Hashing helpers for reproducible seeds and artifact provenance."""
import hashlib
import json
import typing as tp

import numpy as np

_SEED_MASK = (1 << 64) - 1


def canonical_json(payload: tp.Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def sha256_hex(payload: tp.Union[str, bytes]) -> str:
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def derive_seed(seed: int, *keys: int) -> int:
    """Return a 63-bit child seed of ``seed`` for the given integer keys.

    Children with different keys are statistically independent streams.
    """
    sequence = np.random.SeedSequence([seed & _SEED_MASK, *keys])
    return int(sequence.generate_state(1, dtype=np.uint64)[0]) >> 1


def trial_seed(base_seed: int, dataset: str, trial: int) -> int:
    """Seed shared by every method for one (dataset, trial) cell."""
    digest = hashlib.sha256(f"{dataset}:{trial}".encode()).digest()
    return (base_seed ^ int.from_bytes(digest[:8], "big")) & (
        _SEED_MASK >> 1
    )


def array_fingerprint(*arrays: np.ndarray) -> str:
    digest = hashlib.sha256()
    for array in arrays:
        array = np.ascontiguousarray(array)
        digest.update(str(array.shape).encode())
        digest.update(str(array.dtype).encode())
        digest.update(array.tobytes())
    return digest.hexdigest()
