from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, TypeVar

from .errors import PrecisionExhausted


logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class PrecisionPolicy:
    max_attempts: int = 3
    growth: int = 10


def with_precision(fn: Callable[[int], T], prec: int, policy: PrecisionPolicy = PrecisionPolicy()) -> T:
    """Call fn(prec), raising the working precision after each PrecisionExhausted."""
    current = prec
    for attempt in range(1, policy.max_attempts + 1):
        try:
            return fn(current)
        except PrecisionExhausted as exc:
            if attempt >= policy.max_attempts:
                raise
            current = prec + policy.growth * attempt
            logger.warning("precision exhausted (%s); retrying at %d", exc, current)
    raise AssertionError("unreachable")
