import inspect
import logging
from datetime import timedelta
from contextlib import contextmanager

import colored
from django.utils import timezone

logger = logging.getLogger(__name__)


def enum(**kwargs):
    """
    Named constants with a display text:

        STRATEGIES = enum(BINARY=("binary", "Binary alphabet"))
        STRATEGIES.BINARY == "binary"
    """

    class Enum(tuple):
        def __contains__(self, item):
            return any(value == item for value, _display in self)

        def values(self):
            return tuple(value for value, _display in self)

        def items(self):
            return tuple(self)

    res = Enum(kwargs.values())
    for key, (value, _display) in kwargs.items():
        setattr(res, key, value)
    return res


class Colors:
    red = colored.fg("red")
    yellow = colored.fg("yellow")
    green = colored.fg("green")
    bold = colored.attr("bold")
    error = bold + red
    warning = bold + yellow
    success = bold + green


def style(message, color):
    from django.conf import settings  # Settings are not configured when core.utils is imported

    if settings.USE_COLORED_OUTPUT:
        return colored.stylize(message, color)
    return message


def titleize(title, separator="-", width=70):
    """`---- title ----` centered on `width` characters."""
    title = f" {title.strip()} "
    left = max(width - len(title), 0) // 2
    right = max(width - len(title) - left, 0)
    return separator * left + title + separator * right


def strftimedelta(delta: timedelta | None) -> str:
    """Compact duration, largest units first and zero units skipped: `1h 2m`, `3s 140ms`, `< 1ms`."""
    if delta is None:
        return ""
    if delta < timedelta(milliseconds=1):
        return "< 1ms"
    milliseconds = delta // timedelta(milliseconds=1)
    units = [("d", 24 * 3600 * 1000), ("h", 3600 * 1000), ("m", 60 * 1000), ("s", 1000), ("ms", 1)]
    parts = []
    for suffix, size in units:
        quantity, milliseconds = divmod(milliseconds, size)
        if quantity:
            parts.append(f"{quantity}{suffix}")
    return " ".join(parts)


@contextmanager
def warn_if_last_more_than(caller=None, tag=None, log_level=logging.WARNING, **kwargs):
    """Log when the wrapped block runs longer than `timedelta(**kwargs)`."""
    start = timezone.now()
    budget = timedelta(**kwargs)
    yield
    elapsed = timezone.now() - start
    if elapsed <= budget:
        return
    if not caller:
        ignored = ("__exit__", "inner", "warn_if_last_more_than")
        caller = next(frame.function for frame in inspect.stack() if frame.function not in ignored)
    if tag:
        caller += "#" + tag
    # {caller} is formatted first so that records group by call site
    logger.log(log_level, f"{caller} took too long: %s > %s", strftimedelta(elapsed), strftimedelta(budget))
