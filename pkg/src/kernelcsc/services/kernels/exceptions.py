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
"""Exceptions for the kernel bank module."""


class KernelError(Exception):
    """Base class for exceptions in this module."""


class InvalidDescriptorError(KernelError):
    """Raised when kernel parameters are out of range."""


class InvalidBetaError(KernelError):
    """Raised when combination weights violate the sparse domain."""


class RankError(KernelError):
    """Raised when an approximation rank is out of range."""


class BankCacheError(KernelError):
    """Raised when an on-disk kernel bank is missing, stale or corrupt."""
