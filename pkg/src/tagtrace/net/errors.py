"""Station network exception hierarchy."""


class NetError(Exception):
    """Base for station-network failures."""


class FrameError(NetError):
    """Base for framing-level failures."""


class BadSof(FrameError):
    """Frame does not start with the 0xAA start-of-frame byte."""


class BadAddress(FrameError):
    """Address byte is neither a station address (0..29) nor broadcast."""


class BadLength(FrameError):
    """Length byte exceeds the 200-byte payload limit."""


class Truncated(FrameError):
    """Byte string ends before the frame is complete."""


class CrcMismatch(FrameError):
    """Frame check sequence does not match addr..payload."""


class AuthFailed(NetError):
    """Password-protected command carried the wrong password."""


class UnknownCommand(NetError):
    """Command byte not in the dispatch table."""


class StationTimeout(NetError):
    """No station answered at the polled address."""


class RosterFull(NetError):
    """A master already manages its maximum of 30 stations."""


class DuplicateAddress(NetError):
    """A station is already registered at that address."""
