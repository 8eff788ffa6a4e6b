"""Exception hierarchy for the auction engine and its front ends."""


class AuctionError(Exception):
    """Base class for all domain errors raised by this package."""


class NotAssetOwner(AuctionError):
    pass


class InvalidConfig(AuctionError):
    pass


class UnknownAuction(AuctionError):
    pass


class UnknownAsset(AuctionError):
    pass


class NotSeller(AuctionError):
    pass


class WrongState(AuctionError):
    pass


class TooEarly(AuctionError):
    pass


class BidNotHighEnough(AuctionError):
    pass


class AuctionNotLive(AuctionError):
    pass


class OwnerCannotBid(AuctionError):
    pass


class NotSold(AuctionError):
    """Raised when an economic report is requested for an unsold auction."""


class InvalidWindow(AuctionError):
    """Raised when a time-scaled metric is given an empty auction window."""


class ParseError(AuctionError):
    """Input file could not be parsed; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionViolation(AuctionError):
    """A replayed record violated an engine precondition."""


class EmptyInput(AuctionError):
    pass
