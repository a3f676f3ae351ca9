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
"""Deterministic artifact writers.

Artifacts hold no timestamps or timings, so re-running a configuration
reproduces them byte for byte.
"""
import json
import pathlib
import typing as tp

import pandas as pd

from kernelcsc.core.types import StrPath


def trial_dir(out: StrPath, trial: int) -> pathlib.Path:
    path = pathlib.Path(out) / f"trial-{trial}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: StrPath, payload: tp.Any) -> None:
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


def write_csv(
    frame: pd.DataFrame, path: StrPath, meta: tp.Optional[dict] = None
) -> None:
    """Write ``frame`` with ``meta`` entries appended as constant columns."""
    frame = frame.copy()
    for key, value in (meta or {}).items():
        frame[key] = value
    frame.to_csv(path, index=False, lineterminator="\n")
