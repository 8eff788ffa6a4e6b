"""Agent-based bidding simulation over the auction engine.

Drives repeated seeded auctions with rosters of honest and fraudulent
agents so the separation between behavior profiles can be measured as a
distribution over final shill scores. The pseudo-random source is
Python's Mersenne Twister (`random.Random`), seeded per run, so results
are reproducible across platforms.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace

from . import errors
from .engine import AuctionConfig, AuctionEngine
from .fixedpoint import PHI
from .scoring import EconomicReport, economic_report

HONEST = "honest"
AGGRESSIVE_HONEST = "aggressive_honest"
SINGLE_SHILL = "single_account_shill"
MULTI_SHILL = "multi_account_shill"
TIME_COLLUSION = "time_collusion_shill"

SHILL_KINDS = {SINGLE_SHILL, MULTI_SHILL, TIME_COLLUSION}


@dataclass(frozen=True)
class Strategy:
    """Tunable behavior profile for one bidding principal.

    Price parameters are basis points of the reserve price; entry times
    are basis points of the auction duration; delays are seconds.
    """

    kind: str
    accounts: int = 1
    valuation_lo_bp: int = 10200
    valuation_hi_bp: int = 14800
    entry_lo_bp: int = 2000
    entry_hi_bp: int = 5500
    delay_lo: int = 150
    delay_hi: int = 700
    increment_policy: str = "uniform"  # "uniform" in [min, max] or "min"
    stop_price_bp: int = 13000
    self_outbid_bp: int = 0

    def __post_init__(self) -> None:
        if self.accounts < 1 or (self.kind != MULTI_SHILL and self.accounts != 1):
            raise errors.InvalidConfig("only multi-account shills may own several accounts")
        if self.kind == MULTI_SHILL and self.accounts < 2:
            raise errors.InvalidConfig("multi-account shill needs at least two accounts")
        if not 0 < self.stop_price_bp <= 2 * PHI:
            raise errors.InvalidConfig("stop price fraction out of range")


_DEFAULTS = {
    HONEST: Strategy(kind=HONEST),
    AGGRESSIVE_HONEST: Strategy(
        kind=AGGRESSIVE_HONEST,
        valuation_lo_bp=11000,
        valuation_hi_bp=16000,
        entry_lo_bp=800,
        entry_hi_bp=2500,
        delay_lo=40,
        delay_hi=200,
    ),
    SINGLE_SHILL: Strategy(
        kind=SINGLE_SHILL,
        entry_lo_bp=0,
        entry_hi_bp=150,
        delay_lo=5,
        delay_hi=30,
        increment_policy="min",
        stop_price_bp=13000,
        self_outbid_bp=3000,
    ),
    MULTI_SHILL: Strategy(
        kind=MULTI_SHILL,
        accounts=2,
        entry_lo_bp=100,
        entry_hi_bp=900,
        delay_lo=5,
        delay_hi=30,
        increment_policy="min",
        stop_price_bp=13000,
        self_outbid_bp=5500,
    ),
    # Collusion across identities is expressed by putting several
    # time-collusion agents in one roster; each agent owns one account.
    TIME_COLLUSION: Strategy(
        kind=TIME_COLLUSION,
        entry_lo_bp=5200,
        entry_hi_bp=6800,
        delay_lo=1,
        delay_hi=8,
        increment_policy="min",
        stop_price_bp=13500,
        self_outbid_bp=4500,
    ),
}


def strategy_defaults(kind: str, **overrides) -> Strategy:
    base = _DEFAULTS.get(kind)
    if base is None:
        raise errors.InvalidConfig(f"unknown strategy kind {kind!r}")
    return replace(base, **overrides) if overrides else base


@dataclass
class AgentSpec:
    name: str
    strategy: Strategy


@dataclass
class ScenarioConfig:
    name: str
    auction: AuctionConfig
    agents: list[AgentSpec]
    seed: int = 42
    runs: int = 50
    horizon: int | None = None  # defaults to the auction duration
    per_bid_overhead: int = 0

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise errors.InvalidConfig("runs must be at least 1")
        names = [a.name for a in self.agents]
        if len(set(names)) != len(names):
            raise errors.InvalidConfig("agent names must be unique")


@dataclass(frozen=True)
class AuctionView:
    """What an agent can observe when deciding whether to bid."""

    t: int
    n_bids: int
    current_bid: int
    leader: str | None
    start_price: int
    min_increment: int
    max_increment: int
    t_start: int
    t_end: int


class Agent:
    """Runtime state for one principal (one or more bidding accounts)."""

    def __init__(self, spec: AgentSpec, reserve: int, duration: int, rng: random.Random):
        self.spec = spec
        s = spec.strategy
        if s.accounts == 1:
            self.accounts = [spec.name]
        else:
            self.accounts = [f"{spec.name}_{k + 1}" for k in range(s.accounts)]
        self.entry_time = rng.randint(s.entry_lo_bp, s.entry_hi_bp) * duration // PHI
        self.valuation = reserve * rng.randint(s.valuation_lo_bp, s.valuation_hi_bp) // PHI
        self.stop_price = reserve * s.stop_price_bp // PHI
        self._rotation = 0
        self._burst_key = -1
        self._burst_roll = False

    @property
    def is_shill(self) -> bool:
        return self.spec.strategy.kind in SHILL_KINDS

    def decide(self, view: AuctionView, rng: random.Random) -> tuple[int, str, int] | None:
        """Return (delay, account, amount) for the agent's next bid, or None."""
        if self.is_shill:
            return self._decide_shill(view, rng)
        return self._decide_honest(view, rng)

    # -- honest behavior ------------------------------------------------

    def _decide_honest(self, view: AuctionView, rng: random.Random) -> tuple[int, str, int] | None:
        account = self.accounts[0]
        if view.leader == account:
            return None
        if view.n_bids == 0:
            amount = view.start_price
            if amount > self.valuation:
                return None
        else:
            headroom = self.valuation - view.current_bid
            if headroom < view.min_increment:
                return None
            amount = view.current_bid + self._increment(view, headroom, rng)
        delay = self._delay(view.t, rng)
        return (delay, account, amount)

    def _increment(self, view: AuctionView, headroom: int, rng: random.Random) -> int:
        if self.spec.strategy.increment_policy == "min":
            return view.min_increment
        return rng.randint(view.min_increment, max(view.min_increment, min(view.max_increment, headroom)))

    # -- shill behavior -------------------------------------------------

    def _decide_shill(self, view: AuctionView, rng: random.Random) -> tuple[int, str, int] | None:
        s = self.spec.strategy
        leading = view.leader in self.accounts if view.leader else False
        if view.n_bids == 0:
            if view.start_price >= self.stop_price:
                return None
            return (self._delay(view.t, rng), self.accounts[0], view.start_price)

        amount = view.current_bid + self._increment(view, self.stop_price - view.current_bid, rng)
        if amount > self.stop_price:
            return None  # price target reached: avoid winning any higher

        if leading:
            # One self-outbid roll per standing bid; multi-account rings
            # also keep trading the lead among themselves to fake
            # competition, which is what drives the price up.
            if view.n_bids != self._burst_key:
                self._burst_key = view.n_bids
                self._burst_roll = rng.randint(0, PHI - 1) < s.self_outbid_bp
            if self._burst_roll:
                self._burst_roll = False
                return (self._delay(view.t, rng), view.leader, amount)
            if len(self.accounts) > 1:
                others = [a for a in self.accounts if a != view.leader]
                account = others[self._rotation % len(others)]
                self._rotation += 1
                return (self._delay(view.t, rng), account, amount)
            return None

        account = self.accounts[self._rotation % len(self.accounts)]
        self._rotation += 1
        return (self._delay(view.t, rng), account, amount)

    def _delay(self, t: int, rng: random.Random) -> int:
        s = self.spec.strategy
        if t < self.entry_time:
            return self.entry_time - t + rng.randint(0, s.delay_lo)
        return rng.randint(s.delay_lo, s.delay_hi)


def strategy_step(agent: Agent, view: AuctionView, rng: random.Random):
    """One decision step: the agent's next (delay, account, amount) or None."""
    return agent.decide(view, rng)


@dataclass
class AccountSummary:
    account: str
    strategy: str
    bids: int
    bss_trajectory: list[int]
    final_bss: int | None
    fees: int


@dataclass
class RunSummary:
    run: int
    outcome: str
    final_price: int
    accounts: list[AccountSummary] = field(default_factory=list)
    economics: EconomicReport | None = None


def run_scenario(cfg: ScenarioConfig) -> list[RunSummary]:
    """Execute every seeded run of a scenario; deterministic given the seed."""
    return [_run_once(cfg, run) for run in range(cfg.runs)]


def _run_once(cfg: ScenarioConfig, run: int) -> RunSummary:
    rng = random.Random(f"{cfg.seed}:{run}")
    template = cfg.auction
    duration = (cfg.horizon or (template.t_end - template.t_start))
    config = replace(template, t_start=0, t_end=duration)

    engine = AuctionEngine()
    engine.register_asset(config.asset_id, config.seller)
    auction_id = engine.create_auction(config, config.seller)
    engine.activate_auction(auction_id, config.seller)
    auction = engine.auctions[auction_id]

    agents = [Agent(spec, config.reserve_price, duration, rng) for spec in cfg.agents]
    account_owner = {acct: agent for agent in agents for acct in agent.accounts}

    t = 0
    while True:
        view = AuctionView(
            t=t,
            n_bids=len(auction.bids),
            current_bid=auction.current_bid,
            leader=auction.bids[-1].bidder if auction.bids else None,
            start_price=config.start_price,
            min_increment=config.min_increment,
            max_increment=config.max_increment,
            t_start=config.t_start,
            t_end=config.t_end,
        )
        offers = []
        for idx, agent in enumerate(agents):
            offer = agent.decide(view, rng)
            if offer is not None:
                offers.append((offer[0], idx, offer[1], offer[2]))
        if not offers:
            break
        delay, _, account, amount = min(offers, key=lambda o: (o[0], o[1]))
        t_bid = t + max(delay, 0)
        if t_bid >= duration:
            break
        engine.place_bid(auction_id, account, amount, t_bid)
        t = t_bid

    outcome = engine.end_auction(auction_id, config.seller, duration)

    per_account: dict[str, AccountSummary] = {
        acct: AccountSummary(
            account=acct,
            strategy=agent.spec.strategy.kind,
            bids=0,
            bss_trajectory=[],
            final_bss=None,
            fees=0,
        )
        for acct, agent in account_owner.items()
    }
    for bid in auction.bids:
        acc = per_account[bid.bidder]
        acc.bids += 1
        acc.bss_trajectory.append(bid.shill_score)
        acc.final_bss = bid.shill_score
        acc.fees += bid.penalty_fee

    economics = None
    if outcome.sold:
        shill_accounts = [a for a, ag in account_owner.items() if ag.is_shill]
        economics = economic_report(auction, shill_accounts, cfg.per_bid_overhead)

    return RunSummary(
        run=run,
        outcome="sold" if outcome.sold else "not_sold",
        final_price=outcome.price,
        accounts=[per_account[a] for a in sorted(per_account)],
        economics=economics,
    )


def lower_median(values: list[int]) -> int:
    """Median with the lower-of-two convention for even counts."""
    if not values:
        raise errors.EmptyInput("no values to summarize")
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def _quartiles(values: list[int]) -> tuple[int, int]:
    ordered = sorted(values)
    n = len(ordered)
    return ordered[(n - 1) // 4], ordered[(3 * (n - 1)) // 4]


def summarize(summaries: list[RunSummary]) -> dict:
    """Distribution table: per strategy the median/quartiles of final BSS,
    total fees, and per-run outcome rates."""
    if not summaries:
        raise errors.EmptyInput("no run summaries")
    finals: dict[str, list[int]] = {}
    fees: dict[str, int] = {}
    outcomes: dict[str, int] = {}
    for summary in summaries:
        outcomes[summary.outcome] = outcomes.get(summary.outcome, 0) + 1
        for acc in summary.accounts:
            fees[acc.strategy] = fees.get(acc.strategy, 0) + acc.fees
            if acc.final_bss is not None:
                finals.setdefault(acc.strategy, []).append(acc.final_bss)
    strategies = {}
    for strategy in sorted(set(finals) | set(fees)):
        values = finals.get(strategy, [])
        entry = {"samples": len(values), "fees_total": fees.get(strategy, 0)}
        if values:
            q1, q3 = _quartiles(values)
            entry.update({"median": lower_median(values), "q1": q1, "q3": q3})
        strategies[strategy] = entry
    return {"runs": len(summaries), "strategies": strategies, "outcomes": outcomes}


CSV_HEADER = "run,account,strategy,bids,final_bss_bp,fees_base_units,outcome"


def summaries_to_csv(summaries: list[RunSummary]) -> str:
    """One row per (run, account); byte-stable for identical inputs."""
    lines = [CSV_HEADER]
    for summary in summaries:
        for acc in summary.accounts:
            final = "" if acc.final_bss is None else str(acc.final_bss)
            lines.append(
                f"{summary.run},{acc.account},{acc.strategy},{acc.bids},"
                f"{final},{acc.fees},{summary.outcome}"
            )
    return "\n".join(lines) + "\n"


def load_scenario(path: str) -> ScenarioConfig:
    """Parse a scenario JSON file (amounts are exact ETH decimal strings)."""
    from .bidlog import parse_amount

    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise errors.ParseError(f"invalid scenario JSON: {exc}") from None
    try:
        auc = raw["auction"]
        duration = int(auc.get("duration", 18000))
        market = auc.get("market_avg_price")
        config = AuctionConfig(
            seller=auc.get("seller", "seller"),
            asset_id=auc.get("asset_id", "lot0"),
            start_price=parse_amount(str(auc["start_price"])),
            reserve_price=parse_amount(str(auc["reserve_price"])),
            t_start=0,
            t_end=duration,
            min_increment=parse_amount(str(auc["min_increment"])),
            max_increment=parse_amount(str(auc["max_increment"])),
            market_avg_price=None if market is None else parse_amount(str(market)),
        )
        agents = []
        for entry in raw["agents"]:
            params = {k: (v if k == "increment_policy" else int(v)) for k, v in entry.get("params", {}).items()}
            agents.append(AgentSpec(name=entry["name"], strategy=strategy_defaults(entry["strategy"], **params)))
        return ScenarioConfig(
            name=raw.get("name", "scenario"),
            auction=config,
            agents=agents,
            seed=int(raw.get("seed", 42)),
            runs=int(raw.get("runs", 50)),
            horizon=int(raw["horizon"]) if "horizon" in raw else None,
            per_bid_overhead=parse_amount(str(raw.get("per_bid_overhead", "0"))),
        )
    except KeyError as exc:
        raise errors.ParseError(f"scenario is missing field {exc}") from None
