import json

import pytest

import auctionsim
from auctionsim import cli
from auctionsim.bidlog import load_auction_config, load_bid_log


def test_replay_command_writes_reports(tmp_path, capsys):
    out = tmp_path / "out"
    rc = cli.main(
        [
            "replay",
            "--log", auctionsim.data_path("case_study_bids.csv"),
            "--config", auctionsim.data_path("case_study_auction.json"),
            "--out", str(out),
        ]
    )
    assert rc == 0
    printed = capsys.readouterr().out
    assert "final price 3.06 ETH" in printed
    assert "gross profit 1.06 ETH" in printed

    report = json.loads((out / "report.json").read_text())
    assert report["outcome"] == "sold"
    assert report["final_price"] == 3_060_000_000_000_000_000
    assert report["bids"] == 20 and report["rejected"] == []
    assert report["economics"]["net_profit"] < report["economics"]["gross_profit"]

    lines = (out / "bids.csv").read_text().strip().split("\n")
    assert lines[0] == cli.BIDS_CSV_HEADER
    assert len(lines) == 21


def test_replay_explicit_shill_accounts_override_roles(tmp_path):
    out = tmp_path / "out"
    rc = cli.main(
        [
            "replay",
            "--log", auctionsim.data_path("case_study_bids.csv"),
            "--config", auctionsim.data_path("case_study_auction.json"),
            "--shill-accounts", "HonestBidder1",
            "--out", str(out),
        ]
    )
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["economics"]["shill_accounts"] == ["HonestBidder1"]


def test_replay_collects_rejected_rows(tmp_path):
    log = tmp_path / "log.csv"
    log.write_text(
        "bidder,time,amount\n"
        "alice,10:30:00,0.40\n"
        "bob,10:31:00,0.40\n"  # not higher: rejected, replay continues
        "bob,10:32:00,0.60\n"
    )
    records = load_bid_log(str(log))
    config = load_auction_config(auctionsim.data_path("case_study_auction.json"))
    _, bundle = cli.replay_log(records, config)
    assert len(bundle.bid_rows) == 2
    assert bundle.rejected == [{"line": 3, "bidder": "bob", "error": "BidNotHighEnough"}]
    assert bundle.outcome == "not_sold"


def test_simulate_command(tmp_path, capsys):
    out = tmp_path / "out"
    rc = cli.main(
        [
            "simulate",
            "--scenario", auctionsim.data_path("single_shill.json"),
            "--runs", "3",
            "--seed", "7",
            "--out", str(out),
        ]
    )
    assert rc == 0
    assert "3 runs, seed 7" in capsys.readouterr().out
    table = json.loads((out / "distribution.json").read_text())
    assert table["runs"] == 3
    csv_lines = (out / "runs.csv").read_text().strip().split("\n")
    assert csv_lines[0] == "run,account,strategy,bids,final_bss_bp,fees_base_units,outcome"


def test_estimate_storage_command(capsys):
    rc = cli.main(["estimate-storage", "--auctions", "1000", "--bids", "100", "--bidders", "10"])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "full_onchain: 13328 bytes/auction, 13328000 bytes total" in printed
    assert "hybrid: 600 bytes/auction, 600000 bytes total" in printed
    assert "reduction: ~96%" in printed


def test_cli_reports_errors_without_traceback(tmp_path, capsys):
    rc = cli.main(
        [
            "replay",
            "--log", str(tmp_path / "missing.csv"),
            "--config", auctionsim.data_path("case_study_auction.json"),
            "--out", str(tmp_path),
        ]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")

    bad = tmp_path / "bad.csv"
    bad.write_text("bidder,time,amount\nalice,xx,1\n")
    rc = cli.main(["replay", "--log", str(bad), "--config",
                   auctionsim.data_path("case_study_auction.json"), "--out", str(tmp_path)])
    assert rc == 1


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args([])
