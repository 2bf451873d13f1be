"""Exception types shared across the package."""


class TiltcharError(Exception):
    """Base class for all package-specific errors."""


class NotDominant(TiltcharError):
    """A dominant weight was required."""


class NoLift(TiltcharError):
    """No GL3 weight of the requested degree maps to the given SL3 weight."""


class NotWInvariant(TiltcharError):
    """A formal character was expected to be Weyl-group invariant."""


class NotInClosure(TiltcharError):
    """A weight was required to lie in the closure of the fundamental alcove."""


class NotLinked(TiltcharError):
    """Two weights were required to lie in the same affine-Weyl orbit."""


class BadLevel(TiltcharError):
    """An unsupported level/characteristic combination was requested."""


class BadParams(TiltcharError):
    """Closed-form table parameters outside their stated ranges."""


class OutOfValidatedRange(TiltcharError):
    """The requested weight lies beyond the proven range; the engine refuses."""


class OutOfRegion(TiltcharError):
    """A weight lies outside the region an operation is defined on."""


class OutOfImplementedRange(TiltcharError):
    """A quantum character was requested beyond the implemented region."""


class CertificateFailure(TiltcharError):
    """A decomposition step could not be certified; the engine never guesses."""


class TooLarge(TiltcharError):
    """A Specht-module computation exceeds the configured size bound."""
