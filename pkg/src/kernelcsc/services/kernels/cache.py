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
"""On-disk kernel bank cache.

A cached bank is a directory with one ``.npy`` file per kernel and a
``manifest.json`` describing each file (descriptor, normalization
scale, SHA-256 checksum) plus the fingerprint of the inputs the bank
was built from.
"""
import hashlib
import json
import logging
import pathlib
import typing as tp

import numpy as np
from django.conf import settings

from kernelcsc.core.models import (
    FeatureMap,
    GramMatrix,
    KernelBank,
    KernelDescriptor,
)
from kernelcsc.core.types import StrPath
from kernelcsc.services.kernels.exceptions import BankCacheError

LOGGER = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def _file_digest(path: pathlib.Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def save_bank(bank: KernelBank, directory: StrPath, fingerprint: str) -> None:
    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for index, kernel in enumerate(bank):
        name = f"kernel-{index:03d}.npy"
        np.save(directory / name, np.asarray(kernel.values))
        entries.append(
            {
                "file": name,
                "descriptor": (
                    None
                    if kernel.descriptor is None
                    else json.loads(kernel.descriptor.json())
                ),
                "scale": kernel.scale,
                "sha256": _file_digest(directory / name),
            }
        )
    manifest = {
        "fingerprint": fingerprint,
        "approximate": bank.approximate,
        "kernels": entries,
        "metadata": bank.metadata,
    }
    with open(directory / MANIFEST, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    LOGGER.debug("Cached %d kernels in %s", bank.p, directory)


def load_bank(directory: StrPath, fingerprint: str) -> KernelBank:
    """Load a cached bank, checking its fingerprint and checksums."""
    directory = pathlib.Path(directory)
    try:
        with open(directory / MANIFEST) as f:
            manifest = json.load(f)
    except FileNotFoundError as e:
        raise BankCacheError(f"No cached bank in {directory}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise BankCacheError(f"Unreadable manifest in {directory}") from e

    if manifest.get("fingerprint") != fingerprint:
        raise BankCacheError(f"Cached bank in {directory} is stale")

    kind = FeatureMap if manifest.get("approximate") else GramMatrix
    kernels = []
    for entry in manifest.get("kernels", []):
        path = directory / entry["file"]
        if not path.is_file() or _file_digest(path) != entry["sha256"]:
            raise BankCacheError(f"Cached kernel {path} is corrupt")
        values = np.load(path, allow_pickle=False)
        values.setflags(write=False)
        descriptor = entry.get("descriptor")
        kernels.append(
            kind(
                values=values,
                descriptor=(
                    None
                    if descriptor is None
                    else KernelDescriptor.parse_obj(descriptor)
                ),
                scale=float(entry["scale"]),
            )
        )
    if not kernels:
        raise BankCacheError(f"Cached bank in {directory} is empty")
    return KernelBank(kernels=tuple(kernels), metadata=manifest["metadata"])


def cached_bank(
    build: tp.Callable[[], KernelBank],
    fingerprint: str,
    cache_dir: tp.Optional[StrPath] = None,
) -> KernelBank:
    """Return the cached bank for ``fingerprint`` or build and cache it.

    With no cache directory (argument or ``BANK_CACHE_DIR``) this just
    calls ``build``.
    """
    cache_dir = cache_dir or settings.BANK_CACHE_DIR
    if not cache_dir:
        return build()
    directory = pathlib.Path(cache_dir) / fingerprint[:16]
    try:
        bank = load_bank(directory, fingerprint)
        LOGGER.info("Loaded cached kernel bank from %s", directory)
        return bank
    except BankCacheError as e:
        LOGGER.info("Rebuilding kernel bank: %s", e)
    bank = build()
    save_bank(bank, directory, fingerprint)
    return bank
