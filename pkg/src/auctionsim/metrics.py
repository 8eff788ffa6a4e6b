"""Behavioral counters and the nine bid-pattern metrics.

Every metric returns a PHI-scaled integer in [0, PHI]. Inputs are read
from the counter records maintained by :class:`StatsStore` at the moment
a bid is accepted, after the incoming bid has been folded into the
counters (so frequency-style metrics include the bid being scored).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import errors
from .fixedpoint import PHI, clamp_fp, mul_div


@dataclass
class BidderAuctionStats:
    """Per-(bidder, auction) counters, mirroring the on-auction record."""

    bid_count: int = 0
    last_bid_time: int = 0
    last_bid_amount: int = 0
    last_outbid_time_diff: int = 0
    total_outbid_time_diff: int = 0
    last_bid_increment: int = 0
    successive_outbids: int = 0
    shill_score: int = 0
    transaction_fee: int = 0
    # Individual gaps are kept because the outbid-time metric clamps each
    # gap term before averaging; a running sum is not enough.
    outbid_gaps: list[int] = field(default_factory=list)


@dataclass
class BidderStats:
    """Cross-auction counters for one account."""

    auctions_participated: int = 0
    won_auctions: int = 0
    per_auction: dict[int, BidderAuctionStats] = field(default_factory=dict)

    def auction_stats(self, auction_id: int) -> BidderAuctionStats:
        stats = self.per_auction.get(auction_id)
        if stats is None:
            stats = BidderAuctionStats()
            self.per_auction[auction_id] = stats
        return stats


@dataclass
class AuctionAggregate:
    """Whole-auction bid counts and outbid-gap totals (for the average gap)."""

    total_bids: int = 0
    sum_outbid_gaps: int = 0
    count_outbid_gaps: int = 0


def alpha_early_bidding(bid_time: int, t_start: int, t_end: int) -> int:
    """Fraction of the auction window remaining when the bid lands."""
    if t_end <= t_start:
        raise errors.InvalidWindow("auction window is empty")
    return mul_div(PHI, t_end - bid_time, t_end - t_start)


def iota_late_bidding(bid_time: int, t_start: int, t_end: int) -> int:
    """Fraction of the auction window elapsed; exact complement of alpha.

    Defined as PHI - alpha so the two always sum to PHI even when the
    window does not divide evenly.
    """
    return PHI - alpha_early_bidding(bid_time, t_start, t_end)


def beta_bid_increment(dp: int, dp_min: int, dp_max: int) -> int:
    """Suspicion of small increments: PHI at the minimum step, 0 at the max.

    A degenerate range (dp_max <= dp_min) carries no increment signal and
    returns 0. Increments above dp_max clamp to 0 (large bids are never
    rejected, only scored).
    """
    if dp_max <= dp_min:
        return 0
    return clamp_fp(PHI - (PHI * (dp - dp_min)) // (dp_max - dp_min))


def gamma_outbid_time(stats: BidderAuctionStats, aggregate: AuctionAggregate) -> int:
    """How quickly the bidder outbids, relative to the auction's average gap.

    Each recorded gap contributes clamp(PHI - PHI * gap / T_avg) where
    T_avg = sum_outbid_gaps / count_outbid_gaps; the metric is the plain
    mean of those terms. Returns 0 when the bidder has no recorded gap or
    the auction has none.
    """
    if not stats.outbid_gaps or aggregate.count_outbid_gaps == 0:
        return 0
    total = aggregate.sum_outbid_gaps
    count = aggregate.count_outbid_gaps
    acc = 0
    for gap in stats.outbid_gaps:
        if total == 0:
            # Every gap in the auction is zero: instant outbidding.
            acc += PHI
        else:
            acc += clamp_fp(PHI - (PHI * gap * count) // total)
    return acc // len(stats.outbid_gaps)


def delta_bid_frequency(n_i_j: int, n_j: int) -> int:
    """Share of the auction's bids placed by this bidder."""
    return mul_div(PHI, n_i_j, n_j)


def epsilon_bidder_tendency(m_i_s: int, w_i_s: int, m_i: int) -> int:
    """Concentration of unwon participations with this seller."""
    return mul_div(PHI, m_i_s - w_i_s, m_i)


def zeta_winning_ratio(w_i: int, m_i: int) -> int:
    """How often the bidder loses: PHI for a bidder who never wins."""
    return PHI - mul_div(PHI, w_i, m_i)


def eta_successive_outbidding(n_self: int, n_i_j: int) -> int:
    """Share of the bidder's bids that outbid their own standing bid."""
    return mul_div(PHI, n_self, n_i_j)


def kappa_starting_price(start_price: int, market_avg: int | None) -> int:
    """Discount of the start price below the market average; 0 without one."""
    if not market_avg:
        return 0
    return clamp_fp(PHI - (PHI * start_price) // market_avg)


class StatsStore:
    """Single-writer store of bidder, seller and auction counters."""

    def __init__(self) -> None:
        self.bidders: dict[str, BidderStats] = {}
        self.seller_participations: dict[tuple[str, str], int] = {}
        self.seller_wins: dict[tuple[str, str], int] = {}
        self.participation_flags: set[tuple[str, str, int]] = set()
        self.aggregates: dict[int, AuctionAggregate] = {}

    def bidder(self, account: str) -> BidderStats:
        stats = self.bidders.get(account)
        if stats is None:
            stats = BidderStats()
            self.bidders[account] = stats
        return stats

    def aggregate(self, auction_id: int) -> AuctionAggregate:
        agg = self.aggregates.get(auction_id)
        if agg is None:
            agg = AuctionAggregate()
            self.aggregates[auction_id] = agg
        return agg

    def participations_with(self, bidder: str, seller: str) -> int:
        return self.seller_participations.get((bidder, seller), 0)

    def wins_with(self, bidder: str, seller: str) -> int:
        return self.seller_wins.get((bidder, seller), 0)

    def record_bid(
        self,
        auction_id: int,
        seller: str,
        bidder: str,
        amount: int,
        now: int,
        prev_bidder: str | None,
        prev_amount: int,
        prev_time: int,
    ) -> BidderAuctionStats:
        """Fold one accepted bid into the counters.

        Must be called exactly once per accepted bid. `prev_*` describe
        the auction's previous highest bid, or `prev_bidder=None` for the
        auction's first bid. The bidder's own first bid in an auction
        records neither an outbid gap nor an increment; auction-level
        gaps count every adjacent pair.
        """
        bs = self.bidder(bidder)
        bas = bs.auction_stats(auction_id)
        agg = self.aggregate(auction_id)

        first_in_auction = bas.bid_count == 0
        if first_in_auction:
            bs.auctions_participated += 1
            key = (bidder, seller)
            self.seller_participations[key] = self.seller_participations.get(key, 0) + 1
            self.participation_flags.add((bidder, seller, auction_id))

        if prev_bidder is not None:
            gap = now - prev_time
            agg.sum_outbid_gaps += gap
            agg.count_outbid_gaps += 1
            if not first_in_auction:
                bas.outbid_gaps.append(gap)
                bas.last_outbid_time_diff = gap
                bas.total_outbid_time_diff += gap
            if prev_bidder == bidder:
                bas.successive_outbids += 1
        if not first_in_auction:
            # Increment between the bidder's own consecutive bids; their
            # first bid in an auction records none.
            bas.last_bid_increment = amount - bas.last_bid_amount

        bas.bid_count += 1
        bas.last_bid_time = now
        bas.last_bid_amount = amount
        agg.total_bids += 1
        return bas

    def record_outcome(self, auction_id: int, seller: str, winner: str | None) -> None:
        """Credit a sale to the winner's cross-auction and per-seller wins."""
        if winner is None:
            return
        bs = self.bidder(winner)
        bs.won_auctions += 1
        key = (winner, seller)
        self.seller_wins[key] = self.seller_wins.get(key, 0) + 1
