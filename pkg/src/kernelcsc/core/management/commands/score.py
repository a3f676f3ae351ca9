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
import json

import numpy as np
import pandas as pd
from django.core.management import BaseCommand

from kernelcsc.core.enums import Stage
from kernelcsc.services.cluster.output import load_partition
from kernelcsc.services.dataio.files import load_dataset
from kernelcsc.services.evaluation.exceptions import EvaluationError
from kernelcsc.services.evaluation.metrics import score
from kernelcsc.tasks.experiment import stage

from ._options import command_errors


def _read_mask(path: str, n: int) -> np.ndarray:
    rows = pd.read_csv(path, header=None, comment="#")[0]
    rows = rows.to_numpy(dtype=np.int64)
    if rows.size and (rows.min() < 0 or rows.max() >= n):
        raise EvaluationError(f"Mask {path} has rows outside 0..{n - 1}")
    mask = np.zeros(n, dtype=bool)
    mask[rows] = True
    return mask


class Command(BaseCommand):
    help = "Score a saved partition against dataset labels (JSON output)."

    def add_arguments(self, parser):
        parser.add_argument("--partition", required=True)
        parser.add_argument("--dataset", required=True)
        parser.add_argument(
            "--label-column", dest="label_column", default="target"
        )
        parser.add_argument(
            "--mask",
            help="File of row indices to evaluate on, one per line",
        )

    def handle(self, *args, **options):
        with command_errors():
            with stage(Stage.LOAD):
                data = load_dataset(
                    options["dataset"], options["label_column"]
                )
                labels = load_partition(options["partition"])
            with stage(Stage.SCORE):
                mask = None
                if options["mask"]:
                    mask = _read_mask(options["mask"], data.n)
                report = score(labels, data.labels, mask)
        self.stdout.write(json.dumps(report.to_dict(), sort_keys=True))
