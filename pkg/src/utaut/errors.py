"""Exception types shared by all modules."""


class UtautError(Exception):
    """Base class for every error raised by this package."""


class BadParams(UtautError, ValueError):
    pass


class NotPrime(BadParams):
    pass


class DegreeTooLarge(BadParams):
    pass


class ContextMismatch(UtautError, ValueError):
    pass


class DivisionByZero(UtautError, ZeroDivisionError):
    pass


class IndexOutOfRange(UtautError, IndexError):
    pass


class CapExceeded(UtautError):
    """A configured resource cap would be exceeded (CLI exit code 3)."""


class OrderCapExceeded(CapExceeded):
    pass


class CandidateCapExceeded(CapExceeded):
    pass


class ClosureCapExceeded(CapExceeded):
    pass


class PositionTruncated(UserWarning):
    """A transvection at diagonal distance >= k is trivial in the quotient."""


class NotConjugate(UtautError):
    pass


class NotHomomorphism(UtautError):
    def __init__(self, element: int, generator: int):
        super().__init__(f"generator map breaks multiplication at element {element}, generator {generator}")
        self.element = element
        self.generator = generator


class NotBijective(UtautError):
    pass


class PrimeFieldRejected(BadParams):
    pass


class BadC(BadParams):
    pass


class ExtensionFailed(UtautError):
    pass


class CertificationError(UtautError):
    """A constructed object failed a certificate that should hold."""
