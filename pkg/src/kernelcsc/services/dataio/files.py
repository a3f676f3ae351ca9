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
"""Reading and writing datasets and constraint files."""
import csv
import logging
import pathlib
import typing as tp

import numpy as np
import pandas as pd

from kernelcsc.core.enums import ConstraintKind
from kernelcsc.core.models import ConstraintSet, DataMatrix
from kernelcsc.core.types import StrPath
from kernelcsc.services.dataio.exceptions import (
    ConstraintFileError,
    DatasetNotFoundError,
    DatasetParseError,
    InvalidConstraintError,
    LabelColumnError,
)

LOGGER = logging.getLogger(__name__)


def _parse_labels(column: pd.Series) -> np.ndarray:
    numeric = pd.to_numeric(column, errors="coerce")
    if not numeric.isna().any():
        values = numeric.to_numpy(dtype=np.float64)
        if np.all(values == np.round(values)):
            return values.astype(np.int64)
    codes, _ = pd.factorize(column, sort=True)
    return codes.astype(np.int64)


def load_dataset(
    path: StrPath,
    label_column: str = "target",
    name: tp.Optional[str] = None,
) -> DataMatrix:
    """Load a delimited table (tab or comma) with a header row.

    Every column except ``label_column`` is a numeric feature. Rows keep
    their file order.
    """
    path = pathlib.Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Dataset {path} does not exist")

    try:
        frame = pd.read_csv(
            path,
            sep=None,
            engine="python",
            dtype=str,
            keep_default_na=False,
        )
    except (csv.Error, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetParseError(f"Cannot parse {path}: {e}") from e

    if label_column not in frame.columns:
        raise LabelColumnError(
            f"Label column '{label_column}' not found in {path}; "
            f"columns are {list(frame.columns)}"
        )

    labels = _parse_labels(frame[label_column])
    features = frame.drop(columns=[label_column])
    numeric = features.apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna().to_numpy()
    if bad.any():
        row, col = np.argwhere(bad)[0]
        column = str(features.columns[col])
        raise DatasetParseError(
            f"{path}: data row {row}, column '{column}': cannot parse "
            f"{features.iat[row, col]!r} as a number",
            row=int(row),
            column=column,
        )

    data = DataMatrix(
        values=numeric.to_numpy(dtype=np.float64),
        labels=labels,
        name=name or path.stem,
        columns=tuple(str(c) for c in features.columns),
    )
    LOGGER.info(
        "Loaded dataset %s: n=%d d=%d classes=%d",
        data.name,
        data.n,
        data.d,
        data.n_classes,
    )
    return data


def load_constraints(
    path: StrPath, n: tp.Optional[int] = None
) -> ConstraintSet:
    """Parse a constraint file of ``i<TAB>j<TAB>{ML|CL}[<TAB>weight]``.

    Blank lines and lines starting with ``#`` are ignored.
    """
    path = pathlib.Path(path)
    if not path.is_file():
        raise ConstraintFileError(f"Constraint file {path} does not exist")

    pairs: dict[ConstraintKind, list] = {
        ConstraintKind.MUST_LINK: [],
        ConstraintKind.CANNOT_LINK: [],
    }
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (3, 4):
                raise ConstraintFileError(
                    f"{path}:{lineno}: expected 3 or 4 tab separated "
                    f"fields, got {len(fields)}"
                )
            try:
                kind = ConstraintKind(fields[2].strip().upper())
                i, j = int(fields[0]), int(fields[1])
                weight = float(fields[3]) if len(fields) == 4 else 1.0
            except ValueError as e:
                raise ConstraintFileError(f"{path}:{lineno}: {e}") from e
            pairs[kind].append((i, j, weight))

    try:
        cs = ConstraintSet.from_pairs(
            must_link=pairs[ConstraintKind.MUST_LINK],
            cannot_link=pairs[ConstraintKind.CANNOT_LINK],
            n=n,
        )
    except InvalidConstraintError as e:
        raise ConstraintFileError(f"{path}: {e}") from e
    LOGGER.debug(
        "Loaded %d must-link and %d cannot-link constraints from %s",
        cs.n_must_link,
        cs.n_cannot_link,
        path,
    )
    return cs


def write_constraints(
    cs: ConstraintSet, path: StrPath, meta: tp.Optional[dict] = None
) -> None:
    """Write ``cs`` in the format read by :func:`load_constraints`.

    ``meta`` entries become leading ``# key: value`` comment lines.
    """
    with open(path, "w") as f:
        for key, value in (meta or {}).items():
            f.write(f"# {key}: {value}\n")
        for kind in (ConstraintKind.MUST_LINK, ConstraintKind.CANNOT_LINK):
            for (i, j), w in zip(cs.pairs(kind), cs.weights(kind)):
                f.write(f"{i}\t{j}\t{kind}\t{float(w)!r}\n")
