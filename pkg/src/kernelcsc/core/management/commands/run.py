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
from django.core.management import BaseCommand

from kernelcsc.core.models import ExperimentConfig
from kernelcsc.tasks.experiment import run_experiment

from ._options import (
    add_dataset_arguments,
    add_protocol_arguments,
    add_strategy_argument,
    command_errors,
    protocol_overrides,
)


class Command(BaseCommand):
    help = "Learn a kernel and a partition for one dataset."

    def add_arguments(self, parser):
        add_protocol_arguments(parser)
        add_dataset_arguments(parser)
        add_strategy_argument(parser)
        parser.add_argument(
            "--constraints",
            help="Constraint file to use instead of sampled pairs",
        )

    def handle(self, *args, **options):
        with command_errors():
            overrides = protocol_overrides(options, "strategy", "constraints")
            config = ExperimentConfig.load(options["config"], **overrides)
            metrics = run_experiment(config)
        self.stdout.write(
            f"Wrote {len(metrics)} trial(s) of {config.dataset.label} "
            f"to {config.out}"
        )
