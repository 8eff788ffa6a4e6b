"""Bid Shill Score, dynamic penalty fee, economics and storage estimates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from . import errors, metrics
from .fixedpoint import PHI, clamp_fp, div_trunc, mul_div

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Auction, AuctionConfig

#: Weight vector for (alpha, beta, gamma, delta, epsilon, zeta, eta, kappa, iota).
DEFAULT_WEIGHTS = (8, 5, 4, 2, 7, 8, 7, 3, 2)


@dataclass(frozen=True)
class ScoringConfig:
    """Score weights and penalty-fee percentages.

    base_fee and max_fee_bonus are PHI-scaled percentages: the effective
    fee rate runs from base_fee (score 0) to base_fee + max_fee_bonus
    (score PHI), i.e. 2.00% to 7.00% with the defaults.
    """

    weights: tuple[int, ...] = DEFAULT_WEIGHTS
    n_behaviors: int = 9
    base_fee: int = 200
    max_fee_bonus: int = 500

    def __post_init__(self) -> None:
        if len(self.weights) != self.n_behaviors:
            raise errors.InvalidConfig("expected one weight per behavior")
        if any(w < 0 for w in self.weights):
            raise errors.InvalidConfig("weights must be non-negative")
        if self.base_fee + self.max_fee_bonus > PHI:
            raise errors.InvalidConfig("fee percentages exceed 100%")

    @classmethod
    def from_file(cls, path: str) -> "ScoringConfig":
        """Load overrides from a `key = value` file of integers.

        Recognized keys: w1..w9, base_fee, max_fee_bonus. Unknown keys
        are rejected; missing keys keep their defaults.
        """
        weights = list(DEFAULT_WEIGHTS)
        fields = {"base_fee": cls.base_fee, "max_fee_bonus": cls.max_fee_bonus}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise errors.ParseError("expected `key = value`", lineno)
                key, _, value = line.partition("=")
                key = key.strip()
                try:
                    num = int(value.strip())
                except ValueError:
                    raise errors.ParseError(f"non-integer value for {key}", lineno) from None
                if key.startswith("w") and key[1:].isdigit() and 1 <= int(key[1:]) <= 9:
                    weights[int(key[1:]) - 1] = num
                elif key in fields:
                    fields[key] = num
                else:
                    raise errors.ParseError(f"unknown key {key!r}", lineno)
        return cls(weights=tuple(weights), **fields)


@dataclass(frozen=True)
class MetricVector:
    """The nine PHI-scaled behavior metrics for one bid."""

    alpha: int = 0
    beta: int = 0
    gamma: int = 0
    delta: int = 0
    epsilon: int = 0
    zeta: int = 0
    eta: int = 0
    kappa: int = 0
    iota: int = 0

    def as_tuple(self) -> tuple[int, ...]:
        return (
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon,
            self.zeta,
            self.eta,
            self.kappa,
            self.iota,
        )


def compute_bss(m: MetricVector, cfg: ScoringConfig | None = None) -> int:
    """Combine the metric vector into the Bid Shill Score.

    Weighted sum of the first eight metrics minus the late-bidding term
    (sniping is treated as exculpatory), scaled so the result is a
    PHI-scaled percentage and clamped into [0, PHI]. The intermediate sum
    is the only signed quantity in the scoring path.
    """
    cfg = cfg or ScoringConfig()
    w = cfg.weights
    a, b, g, d, e, z, h, k, i = m.as_tuple()
    signed = (
        w[0] * a
        + w[1] * b
        + w[2] * g
        + w[3] * d
        + w[4] * e
        + w[5] * z
        + w[6] * h
        + w[7] * k
        - w[8] * i
    )
    return clamp_fp(div_trunc(2000 * signed, cfg.n_behaviors * PHI))


def compute_fee(bid_amount: int, bss: int, cfg: ScoringConfig | None = None) -> int:
    """Dynamic penalty fee for a bid: base rate plus a score-scaled bonus."""
    cfg = cfg or ScoringConfig()
    if not 0 <= bss <= PHI:
        raise ValueError("bss must lie in [0, PHI]")
    rate = cfg.base_fee + mul_div(bss, cfg.max_fee_bonus, PHI)
    return mul_div(bid_amount, rate, PHI)


def evaluate_bid(
    store: metrics.StatsStore,
    config: "AuctionConfig",
    auction_id: int,
    bidder: str,
    amount: int,
    now: int,
    cfg: ScoringConfig | None = None,
) -> tuple[MetricVector, int, int]:
    """Score the incoming bid from the post-record counter snapshot.

    Must run inside place_bid, immediately after the bid was folded into
    the stats store: frequency metrics then include the incoming bid,
    while win/participation state predates the auction's outcome. A
    bidder's first bid in the auction has no own-increment and records no
    gap, so beta (and, for the auction's first bid, gamma) is neutral.
    """
    cfg = cfg or ScoringConfig()
    bs = store.bidder(bidder)
    bas = bs.auction_stats(auction_id)
    agg = store.aggregate(auction_id)

    alpha = metrics.alpha_early_bidding(now, config.t_start, config.t_end)
    beta = (
        0
        if bas.bid_count < 2
        else metrics.beta_bid_increment(
            bas.last_bid_increment, config.min_increment, config.max_increment
        )
    )
    vector = MetricVector(
        alpha=alpha,
        beta=beta,
        gamma=metrics.gamma_outbid_time(bas, agg),
        delta=metrics.delta_bid_frequency(bas.bid_count, agg.total_bids),
        epsilon=metrics.epsilon_bidder_tendency(
            store.participations_with(bidder, config.seller),
            store.wins_with(bidder, config.seller),
            bs.auctions_participated,
        ),
        zeta=metrics.zeta_winning_ratio(bs.won_auctions, bs.auctions_participated),
        eta=metrics.eta_successive_outbidding(bas.successive_outbids, bas.bid_count),
        kappa=metrics.kappa_starting_price(config.start_price, config.market_avg_price),
        iota=PHI - alpha,
    )
    bss = compute_bss(vector, cfg)
    fee = compute_fee(amount, bss, cfg)
    bas.shill_score = bss
    bas.transaction_fee = fee
    return vector, bss, fee


@dataclass
class EconomicReport:
    """Seller-side profit ledger for one concluded sale."""

    final_price: int
    reserve_price: int
    gross_profit: int
    shill_accounts: list[str] = field(default_factory=list)
    total_shill_cost: int = 0
    per_bid_overhead: int = 0
    net_profit: int = 0  # signed: shilling may be loss-making


def economic_report(
    auction: "Auction",
    shill_accounts: Iterable[str],
    per_bid_overhead: int = 0,
) -> EconomicReport:
    """Evaluate the profit impact of penalties on a sold auction.

    Gross profit is the markup over the reserve; the shill cost sums the
    stored penalty fee (plus the fixed per-bid overhead) over every bid
    placed by an account labeled as a shill.
    """
    if auction.outcome is None or not auction.outcome.sold:
        raise errors.NotSold("economic report requires a sold auction")
    shills = sorted(set(shill_accounts))
    final_price = auction.outcome.price
    gross = final_price - auction.config.reserve_price
    cost = 0
    shill_set = set(shills)
    for bid in auction.bids:
        if bid.bidder in shill_set:
            cost += bid.penalty_fee + per_bid_overhead
    return EconomicReport(
        final_price=final_price,
        reserve_price=auction.config.reserve_price,
        gross_profit=gross,
        shill_accounts=shills,
        total_shill_cost=cost,
        per_bid_overhead=per_bid_overhead,
        net_profit=gross - cost,
    )


# Per-record on-chain byte costs behind the storage estimate.
AUCTION_BYTES = 448
BID_BYTES = 84
BIDDER_STATS_BYTES = 448
HYBRID_AUCTION_BYTES = 300
HYBRID_BID_HASH_BYTES = 100
HYBRID_STATS_BYTES = 200


def estimate_storage(
    auctions: int, bids_per_auction: int, bidders_per_auction: int, mode: str
) -> int:
    """Estimated total bytes of on-chain state for the given workload.

    `mode` is "full_onchain" (every bid and stats record on-chain) or
    "hybrid" (essentials plus hashes on-chain, histories off-chain).
    """
    if min(auctions, bids_per_auction, bidders_per_auction) < 0:
        raise ValueError("counts must be non-negative")
    if mode == "full_onchain":
        per_auction = (
            AUCTION_BYTES
            + BID_BYTES * bids_per_auction
            + BIDDER_STATS_BYTES * bidders_per_auction
        )
    elif mode == "hybrid":
        per_auction = HYBRID_AUCTION_BYTES + HYBRID_BID_HASH_BYTES + HYBRID_STATS_BYTES
    else:
        raise ValueError(f"unknown storage mode {mode!r}")
    return per_auction * auctions
