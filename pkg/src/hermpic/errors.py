"""Exception hierarchy shared across the package."""


class HermpicError(Exception):
    """Base class for all computation errors raised by this package."""


class InvalidGroupError(HermpicError):
    """A group description violates an invariant (divisibility chain, action)."""


class HomValidationError(HermpicError):
    """A homomorphism matrix does not send source relations into target relations."""


class InfiniteGroupError(HermpicError):
    """Element enumeration was requested for a group of positive free rank."""


class InvalidRingError(HermpicError):
    """A ring description violates an invariant; the message names the datum."""


class UnsupportedRingError(HermpicError):
    """The ring family is recognized but outside what this package computes."""


class InfiniteRingError(HermpicError):
    """Element enumeration was requested for an infinite ring."""


class CapExceededError(HermpicError):
    """Enumeration would exceed the configured element cap."""


class DiscriminantError(HermpicError):
    """Invalid or out-of-bounds discriminant for quadratic form routines."""


class FormError(HermpicError):
    """Base class for hermitian-form construction failures."""


class NonUnitValueError(FormError):
    """The proposed form value is not a unit."""


class ValueNotFixedError(FormError):
    """The proposed form value is not fixed by the involution."""


class ModuleClassError(FormError):
    """The module class does not admit a nondegenerate hermitian pairing."""


class RingMismatchError(FormError):
    """Two forms over different rings (or involutions) were combined."""


class ScenarioError(HermpicError):
    """A scenario chain is malformed, inconsistent, or under-determined."""


class CorpusError(HermpicError):
    """A corpus entry is missing or failed to reproduce."""
