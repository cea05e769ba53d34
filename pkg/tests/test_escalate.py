import pytest

from padic_linv.errors import PrecisionExhausted
from padic_linv.escalate import PrecisionPolicy, with_precision


def test_retries_with_more_precision():
    seen = []

    def fn(prec):
        seen.append(prec)
        if prec < 40:
            raise PrecisionExhausted("not yet")
        return prec

    assert with_precision(fn, 30, PrecisionPolicy(max_attempts=3, growth=10)) == 40
    assert seen == [30, 40]


def test_gives_up_after_max_attempts():
    calls = []

    def fn(prec):
        calls.append(prec)
        raise PrecisionExhausted("never")

    with pytest.raises(PrecisionExhausted):
        with_precision(fn, 10, PrecisionPolicy(max_attempts=2, growth=5))
    assert calls == [10, 15]


def test_other_errors_are_not_retried():
    def fn(prec):
        raise ValueError("bad input")

    with pytest.raises(ValueError):
        with_precision(fn, 10)
