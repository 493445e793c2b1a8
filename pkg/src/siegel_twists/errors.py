"""Exception hierarchy shared by all modules."""


class SiegelTwistsError(ValueError):
    """Base class; ``code`` is the machine-readable error tag used by the CLI."""

    code = "error"


class ConductorError(SiegelTwistsError):
    code = "conductor-not-multiple"


class ZeroInputError(SiegelTwistsError):
    code = "zero-input"


class AlphabetMismatch(SiegelTwistsError):
    code = "alphabet-mismatch"


class ParseError(SiegelTwistsError):
    code = "parse-error"


class NotDivisible(SiegelTwistsError):
    code = "not-divisible"


class ZeroScalarImage(SiegelTwistsError):
    code = "zero-scalar-image"


class NotInvariant(SiegelTwistsError):
    code = "not-invariant"

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = list(failed)


class NonCoprimeArgument(SiegelTwistsError):
    code = "non-coprime-argument"


class InvalidWeights(SiegelTwistsError):
    code = "invalid-weights"


class MissingPrime(SiegelTwistsError):
    code = "missing-prime"


class RamifiedPrime(SiegelTwistsError):
    code = "ramified-prime"


class PairingFailure(SiegelTwistsError):
    code = "pairing-failure"


class UnsupportedIndex(SiegelTwistsError):
    code = "unsupported-index"


class NotCoprime(SiegelTwistsError):
    code = "not-coprime"


class BudgetExhausted(SiegelTwistsError):
    code = "budget-exhausted"


class BadField(SiegelTwistsError):
    code = "bad-field"


class EmptySample(SiegelTwistsError):
    code = "empty-sample"


class SchemaViolation(SiegelTwistsError):
    code = "schema-violation"


class UnsupportedCharacter(SiegelTwistsError):
    code = "unsupported-character"
