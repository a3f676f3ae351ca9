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
"""External clustering metrics on held-out rows."""
import json
import typing as tp

import numpy as np
from sklearn import metrics

from kernelcsc.core.models import MetricReport, Partition
from kernelcsc.core.types import BoolArray, IntArray, StrPath
from kernelcsc.services.evaluation.exceptions import (
    EvaluationError,
    TooFewPointsError,
)


def pairwise_f_score(truth: IntArray, pred: IntArray) -> float:
    """F-score of same-cluster pairs against same-class pairs."""
    C = metrics.pair_confusion_matrix(truth, pred)
    tp_, fp, fn = C[1, 1], C[0, 1], C[1, 0]
    denominator = 2 * tp_ + fp + fn
    if denominator == 0:
        return 1.0
    return float(2 * tp_ / denominator)


def score(
    pred: tp.Union[Partition, IntArray],
    truth: IntArray,
    eval_mask: tp.Optional[BoolArray] = None,
) -> MetricReport:
    """Compare predicted clusters to classes on the ``eval_mask`` rows."""
    pred = np.asarray(getattr(pred, "labels", pred))
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise EvaluationError(
            f"{pred.size} predicted labels for {truth.size} true labels"
        )
    if eval_mask is not None:
        eval_mask = np.asarray(eval_mask, dtype=bool)
        if eval_mask.shape != truth.shape:
            raise EvaluationError("Evaluation mask does not match labels")
        pred, truth = pred[eval_mask], truth[eval_mask]
    if truth.size < 2:
        raise TooFewPointsError(
            f"Need at least 2 evaluated points, got {truth.size}"
        )

    return MetricReport(
        ari=float(metrics.adjusted_rand_score(truth, pred)),
        nmi=float(
            metrics.normalized_mutual_info_score(
                truth, pred, average_method="arithmetic"
            )
        ),
        ami=float(
            metrics.adjusted_mutual_info_score(
                truth, pred, average_method="max"
            )
        ),
        fowlkes_mallows=float(metrics.fowlkes_mallows_score(truth, pred)),
        pairwise_f=pairwise_f_score(truth, pred),
        n_eval=int(truth.size),
    )


def write_report(
    report: MetricReport, path: StrPath, meta: tp.Optional[dict] = None
) -> None:
    with open(path, "w") as f:
        payload = {**report.to_dict(), **(meta or {})}
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
