"""Exception hierarchy shared by all hatloop modules."""


class HatloopError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HatloopError):
    """Malformed textual or JSON input."""


class DomainMismatch(HatloopError):
    """Operands live in different scalar domains, or an operation is not
    available in the requested domain (e.g. exp of a nonzero constant over
    exact rationals)."""


class OneSidedError(HatloopError):
    """A series operation that needs a one-sided input got a two-sided one."""


class SingularLoop(HatloopError):
    """A loop vanishes (numerically) somewhere on the sampling circle."""


class FactorizationFailed(HatloopError):
    """No Birkhoff factorization found within the allowed index search."""


class SmallDivisor(HatloopError):
    """A mode divisor fell below the safety threshold during a normal-form
    computation."""


class NonGeneric(HatloopError):
    """Genericity assumption violated (e.g. diagonal value on the excluded
    lattice)."""


class ConvergenceError(HatloopError):
    """Fixed-point iteration failed to reach the requested residual."""


class TableIncomplete(HatloopError):
    """The requested bracket pair is not covered by the structure table."""


class UnsupportedGenerator(HatloopError):
    """The requested Hopf operation is not available for this generator."""


class NotInCenter(HatloopError):
    """Semiclassical specialization hit a pole at the root of unity."""


class MembershipError(HatloopError):
    """An element fails the membership test of the requested subgroup or
    subalgebra."""
