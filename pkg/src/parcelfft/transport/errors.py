"""Transport-layer exception types."""


class TransportError(Exception):
    """Base class for transport failures."""


class FrameDecodeError(TransportError):
    """Raised when wire bytes do not form a valid frame."""


class EndpointShutdownError(TransportError):
    """Raised when an operation is attempted on (or interrupted by) a shut-down endpoint."""


class PeerUnreachableError(TransportError):
    """Raised when a TCP peer cannot be reached after all connect retries."""
