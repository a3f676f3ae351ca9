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
"""Partition files: ``row_index,cluster_label`` CSV plus JSON record."""
import json
import pathlib
import typing as tp

import numpy as np
import pandas as pd

from kernelcsc.core.models import Partition
from kernelcsc.core.types import IntArray, StrPath
from kernelcsc.services.cluster.exceptions import ClusterError


def save_partition(
    partition: Partition,
    path: StrPath,
    meta: tp.Optional[dict] = None,
) -> None:
    """Write the labels CSV and a JSON record next to it.

    ``meta`` entries (e.g. ``config_hash`` and ``seed``) are added as
    CSV columns and JSON fields.
    """
    path = pathlib.Path(path)
    meta = meta or {}
    frame = pd.DataFrame(
        {
            "row_index": np.arange(partition.n),
            "cluster_label": partition.labels,
        }
    )
    for key, value in meta.items():
        frame[key] = value
    frame.to_csv(path, index=False, lineterminator="\n")

    record = {
        "k": partition.k,
        "objective": partition.objective,
        "iterations": partition.iterations,
        **meta,
    }
    with open(path.with_suffix(".json"), "w") as f:
        json.dump(record, f, indent=2, sort_keys=True)
        f.write("\n")


def load_partition(path: StrPath) -> IntArray:
    """Labels of a partition CSV, ordered by ``row_index``."""
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise ClusterError(f"Cannot read partition {path}: {e}") from e
    missing = {"row_index", "cluster_label"} - set(frame.columns)
    if missing:
        raise ClusterError(f"Partition {path} lacks columns {sorted(missing)}")
    frame = frame.sort_values("row_index")
    rows = frame["row_index"].to_numpy()
    if not np.array_equal(rows, np.arange(rows.size)):
        raise ClusterError(f"Partition {path} does not cover rows 0..n-1")
    return frame["cluster_label"].to_numpy(dtype=np.int64)
