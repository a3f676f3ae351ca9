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
"""Exceptions for the evaluation module."""


class EvaluationError(Exception):
    """Base class for exceptions in this module."""


class TooFewPointsError(EvaluationError):
    """Raised when fewer than two points are evaluated."""


class TooFewTrialsError(EvaluationError):
    """Raised when a confidence interval needs more trials."""


class UnbalancedTrialsError(EvaluationError):
    """Raised when cells of a score table have different trial counts."""
