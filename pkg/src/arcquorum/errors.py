"""Exception types shared across the package."""


class QuorumError(Exception):
    """Base class for all arcquorum errors."""


class EmptyArcList(QuorumError):
    pass


class ArcSizeOutOfRange(QuorumError):
    pass


class InvalidParams(QuorumError):
    pass


class TooLargeToEnumerate(QuorumError):
    pass


class NoWorkingMember(QuorumError):
    pass


class IllegalTransition(QuorumError):
    """An event arrived that is impossible in the current replica state.

    Raising this indicates a harness bug, never expected protocol behavior.
    """


class MalformedTrace(QuorumError):
    pass


class ConfigError(QuorumError):
    pass


class CheckFailed(QuorumError):
    pass
