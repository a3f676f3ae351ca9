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

from kernelcsc.core.enums import Stage
from kernelcsc.core.models import ExperimentConfig
from kernelcsc.services.kernels.bank import bank_fingerprint
from kernelcsc.services.kernels.cache import save_bank
from kernelcsc.tasks.experiment import build_kernels, load_data, stage

from ._options import (
    add_dataset_arguments,
    add_protocol_arguments,
    command_errors,
    protocol_overrides,
)


class Command(BaseCommand):
    help = "Build the kernel bank of a dataset and write it to --out."

    def add_arguments(self, parser):
        add_protocol_arguments(parser)
        add_dataset_arguments(parser)

    def handle(self, *args, **options):
        with command_errors():
            config = ExperimentConfig.load(
                options["config"], **protocol_overrides(options)
            )
            data = load_data(config.dataset, config.seed)
            with stage(Stage.BANK):
                bank = build_kernels(data, config, config.seed)
            fingerprint = bank_fingerprint(
                data, config.bank, config.seed, config.approximation.rank
            )
            with stage(Stage.WRITE):
                save_bank(bank, config.out, fingerprint)
        self.stdout.write(str(bank.p))
