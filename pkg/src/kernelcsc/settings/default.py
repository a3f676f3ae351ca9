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
"""
Django settings.

The project has no web or database surface; Django provides the
management command framework and the settings/logging plumbing.

The following values can be defined as well as environment variables
with the prefix KCSC_:

* SETTINGS_FILE - A path to file to load settings from
    Default: /etc/kernelcsc/settings.yaml
* APP_LOG_LEVEL - Log level of the ``kernelcsc`` logger (default: INFO)

Numerical settings:

* DEFAULT_SEED - Seed used when neither config nor CLI give one
    (default: 0)
* MEDIAN_MAX_PAIRS - Pair cap for median heuristics; exact below it
    (default: 1000000)
* DMAX_MAX_PAIRS - Pair cap when estimating the largest feature-space
    distance of an explicit feature map (default: 1000000)
* FACTOR_GRID - Scaling factors of the base-kernel grid, a list or a
    comma separated string.
    Ex: export KCSC_FACTOR_GRID="0.25,0.5,1,2,4"
* KMEANS_MAX_ITER - Lloyd iterations per clustering (default: 100)
* OPTIMIZER_WARMUP - Random iterations before the first surrogate fit
    (default: 10)
* OPTIMIZER_CANDIDATE_POOL - Candidates scored per SMBO step
    (default: 512)
* OPTIMIZER_KAPPA - UCB exploration weight (default: 1.0)
* OPTIMIZER_SPARSITY - Maximum number of active base kernels
    (default: 5)
* SURROGATE_N_ESTIMATORS - Trees of the random forest surrogate
    (default: 100)
* MAHALANOBIS_WARN_DIM - Dimension above which the diagonal metric
    search logs a warning (default: 64)

Execution settings:

* BENCH_WORKERS - Parallel workers for bench trials (default: 1)
* BANK_WORKERS - Parallel workers for kernel bank construction
    (default: 1)
* BANK_CACHE_DIR - Directory of the on-disk kernel bank cache
    (default: None, caching disabled)
"""
import dynaconf
from django.core.exceptions import ImproperlyConfigured

default_settings_file = "/etc/kernelcsc/settings.yaml"

settings = dynaconf.Dynaconf(
    envvar="KCSC_SETTINGS_FILE",
    envvar_prefix="KCSC",
    settings_file=default_settings_file,
)


# ---------------------------------------------------------
# DJANGO SETTINGS
# ---------------------------------------------------------

# Required by Django; nothing here is signed.
SECRET_KEY = settings.get("SECRET_KEY", "kernelcsc-unsigned")

DEBUG = settings.get("DEBUG", False)

INSTALLED_APPS = [
    "kernelcsc.core",
]

DATABASES = {}

USE_TZ = True

TIME_ZONE = "UTC"

# ---------------------------------------------------------
# NUMERICAL SETTINGS
# ---------------------------------------------------------


def _get_positive_int(name: str, default: int) -> int:
    value = settings.get(name, default)
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ImproperlyConfigured(
            f"Setting '{name}' must be an integer, got {value!r}"
        )
    if value < 1:
        raise ImproperlyConfigured(
            f"Setting '{name}' must be positive, got {value}"
        )
    return value


def get_factor_grid() -> list[float]:
    factors = settings.get("FACTOR_GRID", [0.25, 0.5, 1.0, 2.0, 4.0])
    if isinstance(factors, str):
        factors = factors.split(",")
    try:
        factors = [float(f) for f in factors]
    except (TypeError, ValueError):
        raise ImproperlyConfigured(
            f"Setting 'FACTOR_GRID' must be a list of numbers, got {factors!r}"
        )
    if not factors or any(f <= 0 for f in factors):
        raise ImproperlyConfigured(
            "Setting 'FACTOR_GRID' must be a non-empty list of positive "
            f"numbers, got {factors}"
        )
    return factors


def get_optimizer_kappa() -> float:
    kappa = float(settings.get("OPTIMIZER_KAPPA", 1.0))
    if kappa < 0:
        raise ImproperlyConfigured(
            f"Setting 'OPTIMIZER_KAPPA' must be non-negative, got {kappa}"
        )
    return kappa


DEFAULT_SEED = int(settings.get("DEFAULT_SEED", 0))
MEDIAN_MAX_PAIRS = _get_positive_int("MEDIAN_MAX_PAIRS", 1_000_000)
DMAX_MAX_PAIRS = _get_positive_int("DMAX_MAX_PAIRS", 1_000_000)
FACTOR_GRID = get_factor_grid()
KMEANS_MAX_ITER = _get_positive_int("KMEANS_MAX_ITER", 100)

OPTIMIZER_WARMUP = int(settings.get("OPTIMIZER_WARMUP", 10))
OPTIMIZER_CANDIDATE_POOL = _get_positive_int("OPTIMIZER_CANDIDATE_POOL", 512)
OPTIMIZER_KAPPA = get_optimizer_kappa()
OPTIMIZER_SPARSITY = _get_positive_int("OPTIMIZER_SPARSITY", 5)
SURROGATE_N_ESTIMATORS = _get_positive_int("SURROGATE_N_ESTIMATORS", 100)
MAHALANOBIS_WARN_DIM = _get_positive_int("MAHALANOBIS_WARN_DIM", 64)

# ---------------------------------------------------------
# EXECUTION SETTINGS
# ---------------------------------------------------------

BENCH_WORKERS = _get_positive_int("BENCH_WORKERS", 1)
BANK_WORKERS = _get_positive_int("BANK_WORKERS", 1)
BANK_CACHE_DIR = settings.get("BANK_CACHE_DIR", None)

# ---------------------------------------------------------
# LOGGING SETTINGS
# ---------------------------------------------------------

APP_LOG_LEVEL = settings.get("APP_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {name} {levelname:<8} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "root": {"handlers": ["console"], "level": "WARNING"},
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "WARNING",
            "propagate": False,
        },
        "kernelcsc": {
            "handlers": ["console"],
            "level": APP_LOG_LEVEL,
            "propagate": False,
        },
    },
}
