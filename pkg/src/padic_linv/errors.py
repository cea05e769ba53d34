from __future__ import annotations


class PadicLinvError(Exception):
    """Base class for every error raised by padic_linv."""


# p-adic arithmetic


class UnsupportedPrime(PadicLinvError, ValueError):
    pass


class DivisionByImpreciseZero(PadicLinvError, ZeroDivisionError):
    pass


class NotAUnit(PadicLinvError, ValueError):
    pass


class OutsideConvergenceDomain(PadicLinvError, ValueError):
    pass


class NotSimpleRoot(PadicLinvError, ValueError):
    pass


class RootSeedInvalid(PadicLinvError, ValueError):
    pass


class NotAUnitInExtension(PadicLinvError, ValueError):
    pass


class PrecisionExhausted(PadicLinvError, ArithmeticError):
    pass


# quadratic fields


class PrimeNotSplit(PadicLinvError, ValueError):
    pass


class PrimeNotSplitCompletely(PrimeNotSplit):
    pass


class SearchBoundExceeded(PadicLinvError, RuntimeError):
    def __init__(self, message: str, bound: int | None = None) -> None:
        super().__init__(message)
        self.bound = bound


class PUnitSearchFailed(SearchBoundExceeded):
    pass


# L-functions


class OddCharacter(PadicLinvError, ValueError):
    pass


class PoleAtOne(PadicLinvError, ZeroDivisionError):
    pass


class RootOfUnityConstructionFailed(PadicLinvError, RuntimeError):
    pass


# regulators


class DenominatorVanishesToPrecision(PrecisionExhausted):
    pass


class RoutesDisagree(PadicLinvError, AssertionError):
    pass


class IncompleteTable(PadicLinvError, ValueError):
    pass


# theta series


class CharacterDescends(PadicLinvError, ValueError):
    pass


class RegularCase(PadicLinvError, ValueError):
    pass


class LengthExhausted(PadicLinvError, ValueError):
    pass


class IdentityFails(PadicLinvError, AssertionError):
    pass


class RamifiedCharacter(PadicLinvError, ValueError):
    pass


# local algebras


class RelationNotLocal(PadicLinvError, ValueError):
    pass


class NotSurjective(PadicLinvError, ValueError):
    pass


class TruncationInconclusive(PadicLinvError, RuntimeError):
    pass


class ElementNotRegular(PadicLinvError, ValueError):
    pass


class InvalidParameters(PadicLinvError, ValueError):
    pass


class NotAMorphism(PadicLinvError, ValueError):
    pass


class CheckFailed(PadicLinvError):
    """An acceptance check ran to completion and did not pass."""
