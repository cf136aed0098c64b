"""Exception hierarchy shared by every module of the package."""


class NetdefError(Exception):
    """Base class for all package errors."""


class InvalidArgument(NetdefError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(NetdefError, ValueError):
    """A value function was evaluated outside its validated range."""


class UnsupportedConfiguration(NetdefError):
    """The requested (n_B, n_A) combination has no closed-form solver."""


class LimitExceeded(NetdefError):
    """An exhaustive search would exceed its documented size limit."""
