"""Exception hierarchy shared by the numerical modules."""


class L1LdpError(Exception):
    """Base class for all package errors."""


class DomainError(L1LdpError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class BracketError(L1LdpError, ValueError):
    """A root bracket does not show a strict sign change."""


class ConvergenceError(L1LdpError, RuntimeError):
    """An iterative method hit its iteration cap."""
