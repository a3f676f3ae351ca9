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

from kernelcsc.core.models import BenchConfig
from kernelcsc.tasks.bench import run_bench

from ._options import (
    add_protocol_arguments,
    add_strategy_argument,
    command_errors,
    protocol_overrides,
)


class Command(BaseCommand):
    help = "Rank clustering methods over datasets and trials."

    def add_arguments(self, parser):
        add_protocol_arguments(parser)
        add_strategy_argument(parser)
        parser.add_argument(
            "--workers", type=int, help="Parallel trial workers"
        )

    def handle(self, *args, **options):
        with command_errors():
            overrides = protocol_overrides(options, "workers", "strategy")
            config = BenchConfig.load(options["config"], **overrides)
            scores = run_bench(config)
        self.stdout.write(f"Wrote {len(scores)} runs to {config.out}")
