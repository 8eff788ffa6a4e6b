"""Deterministic English auctions with real-time shill-bidding deterrence."""

from .engine import (
    Asset,
    Auction,
    AuctionConfig,
    AuctionEngine,
    AuctionState,
    Bid,
    BidReceipt,
    Outcome,
)
from .fixedpoint import PHI, clamp_fp, mul_div
from .scoring import (
    EconomicReport,
    MetricVector,
    ScoringConfig,
    compute_bss,
    compute_fee,
    economic_report,
    estimate_storage,
    evaluate_bid,
)

__all__ = [
    "Asset",
    "Auction",
    "AuctionConfig",
    "AuctionEngine",
    "AuctionState",
    "Bid",
    "BidReceipt",
    "EconomicReport",
    "MetricVector",
    "Outcome",
    "PHI",
    "ScoringConfig",
    "clamp_fp",
    "compute_bss",
    "compute_fee",
    "economic_report",
    "estimate_storage",
    "evaluate_bid",
    "mul_div",
    "data_path",
]

__version__ = "0.1.0"


def data_path(name: str) -> str:
    """Absolute path of a bundled fixture or scenario file."""
    from pathlib import Path

    path = Path(__file__).parent / "data" / name
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return str(path)
