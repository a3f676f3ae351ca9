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
"""Options shared by the experiment commands."""
import contextlib
import typing as tp

from django.core.management import CommandError

from kernelcsc.core.enums import FinalStep, SearchStrategy, Stage
from kernelcsc.core.exceptions import ConfigError, StageError


def add_protocol_arguments(parser) -> None:
    parser.add_argument("--config", help="YAML experiment configuration")
    parser.add_argument("--seed", type=int, help="Base random seed")
    parser.add_argument("--out", help="Output directory")
    parser.add_argument(
        "--approx-rank",
        type=int,
        dest="approx_rank",
        help="Use rank-q feature maps instead of Gram matrices",
    )
    parser.add_argument(
        "--final",
        choices=FinalStep.values(),
        help="Step applied after the search",
    )
    parser.add_argument("--trials", type=int, help="Number of trials")


def add_dataset_arguments(parser) -> None:
    parser.add_argument("--dataset", help="Delimited data file")
    parser.add_argument(
        "--label-column",
        dest="label_column",
        default="target",
        help="Name of the class label column",
    )
    parser.add_argument("--k", type=int, help="Number of clusters")


def add_strategy_argument(parser) -> None:
    parser.add_argument(
        "--strategy",
        choices=SearchStrategy.values(),
        help="Search strategy over kernel weights",
    )


def protocol_overrides(options: dict, *names: str) -> dict[str, tp.Any]:
    overrides = {
        name: options.get(name)
        for name in ("seed", "out", "approx_rank", "final", "trials", *names)
    }
    if options.get("dataset"):
        overrides["dataset"] = {
            "path": options["dataset"],
            "label_column": options["label_column"],
            "k": options.get("k"),
        }
    return overrides


@contextlib.contextmanager
def command_errors():
    """Report configuration and stage failures as command errors."""
    try:
        yield
    except ConfigError as e:
        raise CommandError(f"stage '{Stage.CONFIG}' failed: {e}") from e
    except StageError as e:
        raise CommandError(str(e)) from e
