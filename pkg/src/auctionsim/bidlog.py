"""Exact parsing of bid logs, money amounts and auction config files.

Money never round-trips through floats: decimal ETH strings are split on
the point and expanded to integer base units (1 ETH = 10^18), erroring
on anything that would lose precision.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from . import errors
from .engine import AuctionConfig

ETH = 10**18
_MAX_FRACTION_DIGITS = 18


def parse_amount(text: str) -> int:
    """Parse a money amount: `1.06` is ETH, a bare integer is base units."""
    text = text.strip()
    if not text:
        raise errors.ParseError("empty amount")
    if text.startswith("-"):
        raise errors.ParseError(f"negative amount {text!r}")
    if "." in text:
        whole, _, fraction = text.partition(".")
        if "." in fraction:
            raise errors.ParseError(f"malformed amount {text!r}")
        if len(fraction) > _MAX_FRACTION_DIGITS:
            raise errors.ParseError(f"more than 18 fractional digits in {text!r}")
        whole = whole or "0"
        fraction = fraction or "0"
        if not (whole.isdigit() and fraction.isdigit()):
            raise errors.ParseError(f"malformed amount {text!r}")
        return int(whole) * ETH + int(fraction.ljust(_MAX_FRACTION_DIGITS, "0"))
    if not text.isdigit():
        raise errors.ParseError(f"malformed amount {text!r}")
    return int(text)


def format_eth(base_units: int) -> str:
    """Render base units as a decimal ETH string without float error."""
    whole, frac = divmod(base_units, ETH)
    if frac == 0:
        return str(whole)
    return f"{whole}.{str(frac).rjust(18, '0').rstrip('0')}"


def parse_time(text: str) -> int:
    """Parse `HH:MM:SS` clock time (seconds into the day) or epoch seconds."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise errors.ParseError(f"malformed time {text!r}")
        h, m, s = (int(p) for p in parts)
        if m >= 60 or s >= 60:
            raise errors.ParseError(f"malformed time {text!r}")
        return h * 3600 + m * 60 + s
    if not text.isdigit():
        raise errors.ParseError(f"malformed time {text!r}")
    return int(text)


@dataclass
class BidLogRecord:
    line: int
    auction_id: int
    bidder: str
    amount: int
    timestamp: int
    role: str | None = None  # "honest" | "shill" when labeled


def load_bid_log(path: str) -> list[BidLogRecord]:
    """Read a bid-history CSV with columns auction,bidder,time,amount[,role]."""
    records: list[BidLogRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise errors.ParseError("empty bid log", 1)
        required = {"bidder", "time", "amount"}
        missing = required - set(reader.fieldnames)
        if missing:
            raise errors.ParseError(f"missing columns: {', '.join(sorted(missing))}", 1)
        for row in reader:
            lineno = reader.line_num
            try:
                role = (row.get("role") or "").strip() or None
                if role is not None and role not in ("honest", "shill"):
                    raise errors.ParseError(f"unknown role {role!r}")
                records.append(
                    BidLogRecord(
                        line=lineno,
                        auction_id=int(row.get("auction") or 0),
                        bidder=row["bidder"].strip(),
                        amount=parse_amount(row["amount"]),
                        timestamp=parse_time(row["time"]),
                        role=role,
                    )
                )
            except errors.ParseError as exc:
                if exc.line is None:
                    raise errors.ParseError(str(exc), lineno) from None
                raise
            except (KeyError, ValueError) as exc:
                raise errors.ParseError(f"bad record: {exc}", lineno) from None
    return records


def load_auction_config(path: str) -> AuctionConfig:
    """Read an auction config JSON (amounts as ETH strings, times as clock
    times or seconds)."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise errors.ParseError(f"invalid config JSON: {exc}") from None
    try:
        market = raw.get("market_avg_price")
        config = AuctionConfig(
            seller=raw.get("seller", "seller"),
            asset_id=raw.get("asset_id", "lot0"),
            start_price=parse_amount(str(raw["start_price"])),
            reserve_price=parse_amount(str(raw["reserve_price"])),
            t_start=parse_time(str(raw["t_start"])),
            t_end=parse_time(str(raw["t_end"])),
            min_increment=parse_amount(str(raw["min_increment"])),
            max_increment=parse_amount(str(raw["max_increment"])),
            market_avg_price=None if market is None else parse_amount(str(market)),
        )
    except KeyError as exc:
        raise errors.ParseError(f"config is missing field {exc}") from None
    config.validate()
    return config
