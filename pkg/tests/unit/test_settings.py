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
from unittest.mock import patch

import pytest

from kernelcsc.settings.default import (
    ImproperlyConfigured,
    get_factor_grid,
    get_optimizer_kappa,
)


@pytest.mark.parametrize(
    "value,expected",
    [
        ([0.5, 2], [0.5, 2.0]),
        ("0.25,1,4", [0.25, 1.0, 4.0]),
    ],
)
@patch("kernelcsc.settings.default.settings")
def test_factor_grid(mock_settings, value, expected):
    mock_settings.get.return_value = value

    result = get_factor_grid()

    assert result == expected


@pytest.mark.parametrize("value", [[], [1, -2], "a,b"])
@patch("kernelcsc.settings.default.settings")
def test_factor_grid_invalid(mock_settings, value):
    mock_settings.get.return_value = value
    with pytest.raises(ImproperlyConfigured):
        get_factor_grid()


@patch("kernelcsc.settings.default.settings")
def test_optimizer_kappa_invalid(mock_settings):
    mock_settings.get.return_value = -0.5
    with pytest.raises(ImproperlyConfigured):
        get_optimizer_kappa()
