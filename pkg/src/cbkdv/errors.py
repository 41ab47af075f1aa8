"""Exception types shared across the package."""


class CbkdvError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateDispersion(CbkdvError):
    """The dispersion coefficient mu is zero; the normalized form is undefined."""


class InvalidExponent(CbkdvError):
    """The nonlinearity exponent p is not a positive number."""


class UnsupportedIntegrationConstant(CbkdvError):
    """A nonzero integration constant d was passed to a normalized-form operation."""


class DomainError(CbkdvError):
    """A non-integer power was requested for a negative or complex base."""


class StencilOutOfDomain(CbkdvError):
    """A finite-difference stencil point falls outside the profile's valid range."""


class NonIntegerExponent(CbkdvError):
    """The series method requires a positive integer exponent p."""


class OrderMismatch(CbkdvError):
    """A coefficient vector's order does not match the system it is evaluated against."""


class OverflowToInfinity(CbkdvError):
    """Series evaluation left the representable floating-point range."""


class StepSizeInvalid(CbkdvError):
    """Integration step or span is unusable (non-positive step, empty span)."""
