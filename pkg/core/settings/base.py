from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = config("SECRET_KEY", default="s3cr3t(*_*)")
DEBUG = config("DEBUG", default=False, cast=bool)

# Application definition
INSTALLED_APPS = [
    # Local
    "core",
    "automata",
    "actions",
    "complexes",
    "residual",
    "cosets",
    "catalog",
]

# No persistence: every object is computed from text inputs
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"

# Output
USE_COLORED_OUTPUT = config("USE_COLORED_OUTPUT", default=True, cast=bool)
LOG_LEVEL = config("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in ["core", "automata", "actions", "complexes", "residual", "cosets", "catalog"]
    },
}

# Action engine caps
GROUP_ORDER_MAX_ELEMENTS = config("GROUP_ORDER_MAX_ELEMENTS", default=100_000, cast=int)
NRF_MAX_ELEMENTS = config("NRF_MAX_ELEMENTS", default=5000, cast=int)
GROUP_ORDER_MAX_LENGTH = config("GROUP_ORDER_MAX_LENGTH", default=24, cast=int)
GROUP_ORDER_PROBES = config("GROUP_ORDER_PROBES", default=16, cast=int)
GROUP_ORDER_PROBE_LENGTH = config("GROUP_ORDER_PROBE_LENGTH", default=12, cast=int)
ORBIT_CAP = config("ORBIT_CAP", default=1_000_000, cast=int)
REPLICATION_MAX_K = config("REPLICATION_MAX_K", default=4, cast=int)
REPLICATION_MAX_M = config("REPLICATION_MAX_M", default=4, cast=int)

# Periodic tilings
TILING_MAX_LENGTH = config("TILING_MAX_LENGTH", default=3, cast=int)

# Residual finiteness
PM_MAX_G_LENGTH = config("PM_MAX_G_LENGTH", default=8, cast=int)
PM_MAX_U_LENGTH = config("PM_MAX_U_LENGTH", default=8, cast=int)
FIX_CORPUS_SIZE = config("FIX_CORPUS_SIZE", default=1000, cast=int)
POWER_EXPONENT_MAX = config("POWER_EXPONENT_MAX", default=64, cast=int)

# Coset enumeration
COSET_CAP = config("COSET_CAP", default=1_000_000, cast=int)

# Catalog
CATALOG_DATA_DIR = BASE_DIR / "catalog" / "data"
ENUMERATION_MAX_ELEMENTS = config("ENUMERATION_MAX_ELEMENTS", default=2000, cast=int)
ENUMERATION_MAX_TABLES = config("ENUMERATION_MAX_TABLES", default=2_000_000, cast=int)
PROPERTY_SUITE_SIZE = config("PROPERTY_SUITE_SIZE", default=1000, cast=int)
PROPERTY_WORD_LENGTH = config("PROPERTY_WORD_LENGTH", default=20, cast=int)
RANDOM_SEED = config("RANDOM_SEED", default=0, cast=int)
