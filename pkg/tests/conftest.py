"""Shared fixtures: random multi-auction history generator."""

from __future__ import annotations

import random

import pytest

from auctionsim.engine import AuctionConfig, AuctionEngine

from oracle import OracleConfig


def random_history(rng: random.Random, max_bids: int = 20):
    """Drive a fresh engine through a random but valid multi-auction history.

    Auction windows are consecutive so earlier outcomes feed the
    cross-auction metrics of later bids. Returns (engine, events,
    oracle_configs) where events is the flat chronological record
    understood by the oracle module.
    """
    engine = AuctionEngine()
    sellers = ["s0", "s1"]
    bidders = ["b0", "b1", "b2", "b3"]
    n_auctions = rng.randint(1, 3)
    window = 200

    events: list = []
    configs: dict[int, OracleConfig] = {}
    budget = rng.randint(1, max_bids)

    for i in range(n_auctions):
        seller = sellers[i % 2]
        t0, t1 = i * window, (i + 1) * window
        start = rng.randint(0, 50)
        config = AuctionConfig(
            seller=seller,
            asset_id=f"lot{i}",
            start_price=start,
            reserve_price=start + rng.randint(0, 40),
            t_start=t0,
            t_end=t1,
            min_increment=rng.randint(1, 5),
            max_increment=rng.randint(6, 30),
            market_avg_price=rng.choice([None, rng.randint(1, 200)]),
        )
        engine.register_asset(config.asset_id, seller)
        aid = engine.create_auction(config, seller)
        engine.activate_auction(aid, seller)
        configs[aid] = OracleConfig(
            seller=seller,
            t_start=t0,
            t_end=t1,
            start_price=config.start_price,
            min_increment=config.min_increment,
            max_increment=config.max_increment,
            market_avg=config.market_avg_price,
        )

        t = t0
        n_bids = rng.randint(0, budget)
        budget -= n_bids
        current = None
        for _ in range(n_bids):
            bidder = rng.choice([b for b in bidders if b != seller])
            if current is None:
                amount = config.start_price + rng.randint(0, 10)
            else:
                amount = current + config.min_increment + rng.randint(0, 20)
            engine.place_bid(aid, bidder, amount, t)
            events.append(("bid", aid, bidder, amount, t))
            current = amount
            t = min(t + rng.randint(0, 30), t1 - 1)
        outcome = engine.end_auction(aid, seller, t1)
        events.append(("end", aid, seller, outcome.winner))

    return engine, events, configs


@pytest.fixture
def rng():
    return random.Random(20260823)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    lines = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::", 1)[1]
                lines.append((name, "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
