"""Event-sourced English-auction engine with penalty-deducting refunds.

The engine owns assets, auctions, the behavioral stats store, a
pull-payment refund ledger and a penalty treasury. Time is always
injected by the caller as a logical clock; replaying the same ordered
event log therefore reproduces byte-identical state.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from . import errors, scoring
from .fixedpoint import checked_add
from .metrics import StatsStore
from .scoring import MetricVector, ScoringConfig


class AuctionState(enum.Enum):
    CREATED = "created"
    ACTIVE = "active"
    ENDED = "ended"


@dataclass
class Asset:
    asset_id: str
    owner: str
    title: str = ""
    description: str = ""


@dataclass
class AuctionConfig:
    seller: str
    asset_id: str
    start_price: int
    reserve_price: int
    t_start: int
    t_end: int
    min_increment: int
    max_increment: int
    market_avg_price: int | None = None

    def validate(self) -> None:
        if not self.seller:
            raise errors.InvalidConfig("seller must be non-empty")
        if self.t_start >= self.t_end:
            raise errors.InvalidConfig("auction window is empty")
        if self.min_increment <= 0:
            raise errors.InvalidConfig("minimum increment must be positive")
        if self.min_increment > self.max_increment:
            raise errors.InvalidConfig("minimum increment exceeds maximum")
        if self.reserve_price < self.start_price:
            raise errors.InvalidConfig("reserve price below start price")
        if self.start_price < 0:
            raise errors.InvalidConfig("start price must be non-negative")


@dataclass
class Bid:
    bidder: str
    amount: int
    timestamp: int
    seq: int
    shill_score: int = 0
    penalty_fee: int = 0
    metrics: MetricVector | None = None


@dataclass
class Outcome:
    sold: bool
    winner: str | None = None
    price: int = 0
    reason: str = ""


@dataclass
class BidReceipt:
    seq: int
    shill_score: int
    penalty_fee: int
    refund_issued: tuple[str, int] | None = None


@dataclass
class Auction:
    auction_id: int
    config: AuctionConfig
    state: AuctionState = AuctionState.CREATED
    bids: list[Bid] = field(default_factory=list)
    current_bid: int = 0
    outcome: Outcome | None = None


class AuctionEngine:
    """Single-writer auction house; one instance per replayable history."""

    def __init__(self, scoring_config: ScoringConfig | None = None, operator: str = "operator"):
        self.scoring_config = scoring_config or ScoringConfig()
        self.operator = operator
        self.assets: dict[str, Asset] = {}
        self.auctions: dict[int, Auction] = {}
        self.stats = StatsStore()
        self.ledger: dict[str, int] = {}
        self.treasury = 0
        self.total_paid_in = 0
        self.total_claimed = 0
        self.events: list[dict] = []
        self._next_auction_id = 0

    # -- asset registry -------------------------------------------------

    def register_asset(self, asset_id: str, owner: str, title: str = "", description: str = "") -> Asset:
        if asset_id in self.assets:
            raise errors.InvalidConfig(f"asset {asset_id!r} already registered")
        asset = Asset(asset_id, owner, title, description)
        self.assets[asset_id] = asset
        return asset

    # -- lifecycle ------------------------------------------------------

    def create_auction(self, config: AuctionConfig, caller: str) -> int:
        config.validate()
        asset = self.assets.get(config.asset_id)
        if asset is None:
            raise errors.UnknownAsset(f"asset {config.asset_id!r} is not registered")
        if asset.owner != caller or config.seller != caller:
            raise errors.NotAssetOwner("caller does not own the auctioned asset")
        auction_id = self._next_auction_id
        self._next_auction_id += 1
        self.auctions[auction_id] = Auction(auction_id=auction_id, config=config)
        asset.owner = "__escrow__"
        self._log("create", auction_id, caller)
        return auction_id

    def activate_auction(self, auction_id: int, caller: str) -> AuctionState:
        auction = self._auction(auction_id)
        if caller != auction.config.seller:
            raise errors.NotSeller("only the seller can activate")
        if auction.state is not AuctionState.CREATED:
            raise errors.WrongState(f"cannot activate from {auction.state.value}")
        auction.state = AuctionState.ACTIVE
        self._log("activate", auction_id, caller)
        return auction.state

    def place_bid(self, auction_id: int, bidder: str, amount: int, now: int) -> BidReceipt:
        auction = self._auction(auction_id)
        config = auction.config
        if auction.state is not AuctionState.ACTIVE:
            raise errors.AuctionNotLive(f"auction is {auction.state.value}")
        if not config.t_start <= now < config.t_end:
            raise errors.AuctionNotLive("bid outside the auction time window")
        if auction.bids and now < auction.bids[-1].timestamp:
            raise errors.AuctionNotLive("bid timestamp precedes the previous bid")
        if bidder == config.seller:
            raise errors.OwnerCannotBid("seller cannot bid in own auction")

        prev = auction.bids[-1] if auction.bids else None
        if prev is None:
            if amount < config.start_price:
                raise errors.BidNotHighEnough("first bid below start price")
        else:
            if amount <= auction.current_bid:
                raise errors.BidNotHighEnough("current bid is not high enough")
            if amount - auction.current_bid < config.min_increment:
                raise errors.BidNotHighEnough("increment below the minimum")

        self.stats.record_bid(
            auction_id,
            config.seller,
            bidder,
            amount,
            now,
            prev.bidder if prev else None,
            prev.amount if prev else 0,
            prev.timestamp if prev else 0,
        )
        vector, bss, fee = scoring.evaluate_bid(
            self.stats, config, auction_id, bidder, amount, now, self.scoring_config
        )
        bid = Bid(
            bidder=bidder,
            amount=amount,
            timestamp=now,
            seq=len(auction.bids) + 1,
            shill_score=bss,
            penalty_fee=fee,
            metrics=vector,
        )
        auction.bids.append(bid)
        auction.current_bid = amount
        self.total_paid_in = checked_add(self.total_paid_in, amount)

        refund_issued = None
        if prev is not None:
            refund = prev.amount - prev.penalty_fee
            self._credit(prev.bidder, refund)
            self.treasury = checked_add(self.treasury, prev.penalty_fee)
            refund_issued = (prev.bidder, refund)

        self._log("bid", auction_id, bidder, amount=amount, t=now)
        return BidReceipt(seq=bid.seq, shill_score=bss, penalty_fee=fee, refund_issued=refund_issued)

    def end_auction(self, auction_id: int, caller: str, now: int) -> Outcome:
        auction = self._auction(auction_id)
        config = auction.config
        if auction.state is not AuctionState.ACTIVE:
            raise errors.WrongState(f"cannot end from {auction.state.value}")
        if caller not in (config.seller, self.operator):
            raise errors.NotSeller("only seller or operator can end the auction")
        if now < config.t_end:
            raise errors.TooEarly("auction window has not elapsed")

        asset = self.assets[config.asset_id]
        last = auction.bids[-1] if auction.bids else None
        if last is None:
            outcome = Outcome(sold=False, reason="no bids")
            asset.owner = config.seller
        elif last.amount >= config.reserve_price:
            outcome = Outcome(sold=True, winner=last.bidder, price=last.amount)
            asset.owner = last.bidder
            self._credit(config.seller, last.amount - last.penalty_fee)
            self.treasury = checked_add(self.treasury, last.penalty_fee)
        else:
            outcome = Outcome(sold=False, reason="reserve not met")
            asset.owner = config.seller
            self._credit(last.bidder, last.amount - last.penalty_fee)
            self.treasury = checked_add(self.treasury, last.penalty_fee)

        auction.state = AuctionState.ENDED
        auction.outcome = outcome
        self.stats.record_outcome(auction_id, config.seller, outcome.winner)
        self._log("end", auction_id, caller, t=now)
        return outcome

    def claim_refund(self, account: str) -> int:
        amount = self.ledger.pop(account, 0)
        self.total_claimed = checked_add(self.total_claimed, amount)
        self._log("claim", -1, account, amount=amount)
        return amount

    # -- queries --------------------------------------------------------

    def balance(self, account: str) -> int:
        return self.ledger.get(account, 0)

    def escrow_total(self) -> int:
        """Sum of standing highest bids on auctions that have not ended."""
        total = 0
        for auction in self.auctions.values():
            if auction.state is not AuctionState.ENDED and auction.bids:
                total += auction.current_bid
        return total

    def conservation_holds(self) -> bool:
        """Funds identity: everything paid in is accounted for somewhere."""
        accounted = (
            self.total_claimed
            + sum(self.ledger.values())
            + self.treasury
            + self.escrow_total()
        )
        return accounted == self.total_paid_in

    # -- event log and replay -------------------------------------------

    def event_log(self) -> str:
        """Line-delimited JSON event log with a byte-stable field order."""
        return "".join(json.dumps(ev, separators=(",", ":")) + "\n" for ev in self.events)

    def dump_state(self) -> bytes:
        """Canonical serialization of all observable state."""
        state = {
            "auctions": [
                {
                    "id": a.auction_id,
                    "state": a.state.value,
                    "current_bid": a.current_bid,
                    "bids": [
                        {
                            "seq": b.seq,
                            "bidder": b.bidder,
                            "amount": b.amount,
                            "t": b.timestamp,
                            "bss": b.shill_score,
                            "fee": b.penalty_fee,
                        }
                        for b in a.bids
                    ],
                    "outcome": None
                    if a.outcome is None
                    else {
                        "sold": a.outcome.sold,
                        "winner": a.outcome.winner,
                        "price": a.outcome.price,
                        "reason": a.outcome.reason,
                    },
                }
                for _, a in sorted(self.auctions.items())
            ],
            "assets": {k: v.owner for k, v in sorted(self.assets.items())},
            "ledger": dict(sorted(self.ledger.items())),
            "treasury": self.treasury,
            "paid_in": self.total_paid_in,
            "claimed": self.total_claimed,
        }
        return json.dumps(state, sort_keys=True, separators=(",", ":")).encode("utf-8")

    @classmethod
    def replay(
        cls,
        log_lines: str,
        assets: dict[str, str],
        configs: dict[int, AuctionConfig],
        scoring_config: ScoringConfig | None = None,
        operator: str = "operator",
    ) -> "AuctionEngine":
        """Rebuild an engine from its event log.

        `assets` maps asset_id to original owner and `configs` maps
        auction_id to its configuration (create events carry neither).
        """
        engine = cls(scoring_config=scoring_config, operator=operator)
        for asset_id, owner in assets.items():
            engine.register_asset(asset_id, owner)
        for lineno, line in enumerate(log_lines.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                ev = json.loads(line)
            except json.JSONDecodeError as exc:
                raise errors.ParseError(f"bad event record: {exc}", lineno) from None
            kind = ev.get("ev")
            if kind == "create":
                config = configs.get(ev["auction"])
                if config is None:
                    raise errors.ParseError(f"no config for auction {ev['auction']}", lineno)
                engine.create_auction(config, ev["actor"])
            elif kind == "activate":
                engine.activate_auction(ev["auction"], ev["actor"])
            elif kind == "bid":
                engine.place_bid(ev["auction"], ev["actor"], ev["amount"], ev["t"])
            elif kind == "end":
                engine.end_auction(ev["auction"], ev["actor"], ev["t"])
            elif kind == "claim":
                engine.claim_refund(ev["actor"])
            else:
                raise errors.ParseError(f"unknown event kind {kind!r}", lineno)
        return engine

    # -- internals ------------------------------------------------------

    def _auction(self, auction_id: int) -> Auction:
        auction = self.auctions.get(auction_id)
        if auction is None:
            raise errors.UnknownAuction(f"auction {auction_id} does not exist")
        return auction

    def _credit(self, account: str, amount: int) -> None:
        self.ledger[account] = checked_add(self.ledger.get(account, 0), amount)

    def _log(self, ev: str, auction_id: int, actor: str, amount: int | None = None, t: int | None = None) -> None:
        record: dict = {"ev": ev, "auction": auction_id, "actor": actor}
        if amount is not None:
            record["amount"] = amount
        if t is not None:
            record["t"] = t
        self.events.append(record)
