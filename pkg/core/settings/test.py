from .base import *

USE_COLORED_OUTPUT = False

# Smaller corpora keep the property suites fast
PROPERTY_SUITE_SIZE = config("PROPERTY_SUITE_SIZE", default=200, cast=int)
FIX_CORPUS_SIZE = config("FIX_CORPUS_SIZE", default=200, cast=int)
