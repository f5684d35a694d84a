from .base import *

DEBUG = False

# Long runs (full enumerations, reproduce all) only report milestones
LOG_LEVEL = config("LOG_LEVEL", default="WARNING")
for logger_config in LOGGING["loggers"].values():
    logger_config["level"] = LOG_LEVEL
