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
from kernelcsc.core.enums import Stage


class ConfigError(Exception):
    """Raised when an experiment configuration is invalid."""


class StageError(Exception):
    """Raised when an experiment stage fails.

    Wraps the underlying service error so the command line can name
    the stage that failed.
    """

    def __init__(self, stage: Stage, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")

    def __reduce__(self):
        return (type(self), (self.stage, self.cause))
