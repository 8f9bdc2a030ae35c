"""Exception types shared across the package."""


class PolyergoError(Exception):
    """Base class for all package-specific errors."""


class SizeCapError(PolyergoError):
    """An enumeration or allocation would exceed a configured cap."""


class DomainError(PolyergoError, ValueError):
    """An argument lies outside an operation's documented domain."""


class ContractError(PolyergoError):
    """An internal consistency requirement failed (bad box, wraparound, ...)."""


class QuadratureError(PolyergoError):
    """Requested quadrature tolerance unreachable within the node budget."""
