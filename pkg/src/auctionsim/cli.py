"""Command-line front end: replay bid logs, run scenarios, size storage."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import errors, sim
from .bidlog import BidLogRecord, format_eth, load_auction_config, load_bid_log
from .engine import AuctionConfig, AuctionEngine
from .scoring import EconomicReport, economic_report, estimate_storage

log = logging.getLogger("auctionsim")

BIDS_CSV_HEADER = "seq,bidder,amount,bss_bp,fee_base_units"


@dataclass
class ReportBundle:
    """Everything a command produced, plus the files it wrote."""

    bid_rows: list[dict] = field(default_factory=list)
    rejected: list[dict] = field(default_factory=list)
    outcome: str = ""
    final_price: int = 0
    economics: EconomicReport | None = None
    summary: dict | None = None
    paths: list[str] = field(default_factory=list)


def replay_log(
    records: list[BidLogRecord],
    config: AuctionConfig,
    shill_accounts: set[str] | None = None,
) -> tuple[AuctionEngine, ReportBundle]:
    """Drive a recorded bid history through a fresh engine.

    Rows violating engine preconditions are collected as rejected, not
    fatal; the remainder of the log is still processed.
    """
    engine = AuctionEngine()
    engine.register_asset(config.asset_id, config.seller)
    auction_id = engine.create_auction(config, config.seller)
    engine.activate_auction(auction_id, config.seller)

    bundle = ReportBundle()
    last_time = config.t_start
    for record in records:
        try:
            receipt = engine.place_bid(auction_id, record.bidder, record.amount, record.timestamp)
        except errors.AuctionError as exc:
            bundle.rejected.append(
                {"line": record.line, "bidder": record.bidder, "error": type(exc).__name__}
            )
            continue
        last_time = record.timestamp
        bundle.bid_rows.append(
            {
                "seq": receipt.seq,
                "bidder": record.bidder,
                "amount": record.amount,
                "bss_bp": receipt.shill_score,
                "fee_base_units": receipt.penalty_fee,
                "role": record.role,
            }
        )

    outcome = engine.end_auction(auction_id, config.seller, max(config.t_end, last_time))
    bundle.outcome = "sold" if outcome.sold else "not_sold"
    bundle.final_price = outcome.price
    if shill_accounts and outcome.sold:
        bundle.economics = economic_report(engine.auctions[auction_id], shill_accounts)
    return engine, bundle


def _economics_dict(report: EconomicReport) -> dict:
    return {
        "final_price": report.final_price,
        "reserve_price": report.reserve_price,
        "gross_profit": report.gross_profit,
        "shill_accounts": report.shill_accounts,
        "total_shill_cost": report.total_shill_cost,
        "per_bid_overhead": report.per_bid_overhead,
        "net_profit": report.net_profit,
    }


def cmd_replay(args: argparse.Namespace) -> int:
    records = load_bid_log(args.log)
    config = load_auction_config(args.config)
    shills = set(a for a in (args.shill_accounts or "").split(",") if a)
    if not shills:
        shills = {r.bidder for r in records if r.role == "shill"}
    _, bundle = replay_log(records, config, shills or None)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bids_path = out / "bids.csv"
    lines = [BIDS_CSV_HEADER]
    lines += [
        f"{r['seq']},{r['bidder']},{r['amount']},{r['bss_bp']},{r['fee_base_units']}"
        for r in bundle.bid_rows
    ]
    bids_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    report = {
        "outcome": bundle.outcome,
        "final_price": bundle.final_price,
        "bids": len(bundle.bid_rows),
        "rejected": bundle.rejected,
        "economics": None if bundle.economics is None else _economics_dict(bundle.economics),
    }
    report_path = out / "report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    bundle.paths = [str(bids_path), str(report_path)]

    print(f"replayed {len(bundle.bid_rows)} bids ({len(bundle.rejected)} rejected)")
    print(f"outcome: {bundle.outcome}, final price {format_eth(bundle.final_price)} ETH")
    if bundle.economics:
        e = bundle.economics
        print(
            f"gross profit {format_eth(e.gross_profit)} ETH, "
            f"shill cost {format_eth(e.total_shill_cost)} ETH, "
            f"net profit {format_eth(e.net_profit)} ETH"
        )
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = sim.load_scenario(args.scenario)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.runs is not None:
        cfg.runs = args.runs
        cfg.__post_init__()
    summaries = sim.run_scenario(cfg)
    table = sim.summarize(summaries)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "runs.csv"
    csv_path.write_text(sim.summaries_to_csv(summaries), encoding="utf-8")
    table_path = out / "distribution.json"
    table_path.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    print(f"scenario {cfg.name!r}: {cfg.runs} runs, seed {cfg.seed}")
    for strategy, entry in table["strategies"].items():
        if "median" in entry:
            print(
                f"  {strategy}: median BSS {entry['median'] / 100:.2f}% "
                f"(q1 {entry['q1'] / 100:.2f}%, q3 {entry['q3'] / 100:.2f}%, "
                f"n={entry['samples']})"
            )
    return 0


def cmd_estimate_storage(args: argparse.Namespace) -> int:
    modes = ["full_onchain", "hybrid"] if args.mode == "both" else [
        "full_onchain" if args.mode == "full" else "hybrid"
    ]
    totals = {}
    for mode in modes:
        total = estimate_storage(args.auctions, args.bids, args.bidders, mode)
        totals[mode] = total
        per = total // args.auctions if args.auctions else 0
        print(f"{mode}: {per} bytes/auction, {total} bytes total")
    if len(totals) == 2 and totals["full_onchain"]:
        reduction = 100 - 100 * totals["hybrid"] // totals["full_onchain"]
        print(f"reduction: ~{reduction}%")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auctionsim",
        description="English-auction shill-bidding deterrence toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser("replay", help="replay a recorded bid log")
    replay.add_argument("--log", required=True, help="bid history CSV")
    replay.add_argument("--config", required=True, help="auction config JSON")
    replay.add_argument("--shill-accounts", help="comma-separated shill labels")
    replay.add_argument("--out", required=True, help="output directory")
    replay.set_defaults(func=cmd_replay)

    simulate = sub.add_parser("simulate", help="run an agent-based scenario")
    simulate.add_argument("--scenario", required=True, help="scenario JSON")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--runs", type=int)
    simulate.add_argument("--out", required=True, help="output directory")
    simulate.set_defaults(func=cmd_simulate)

    storage = sub.add_parser("estimate-storage", help="size the on-chain footprint")
    storage.add_argument("--auctions", type=int, required=True)
    storage.add_argument("--bids", type=int, required=True)
    storage.add_argument("--bidders", type=int, required=True)
    storage.add_argument("--mode", choices=["full", "hybrid", "both"], default="both")
    storage.set_defaults(func=cmd_estimate_storage)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("AUCTIONSIM_LOG_LEVEL", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except errors.AuctionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
