"""Two-phase traffic signal control driven by a bi-fuzzy decision model.

An isolated intersection with two through directions.  After a basic green
time the controller re-evaluates every few seconds whether to extend the
current green or switch, from noisy queue readings and a time-dependent
urgency.  The FDES variant runs through the same code with every interval
collapsed to a point.
"""

from __future__ import annotations

import csv
import io
import math
import random
import statistics
from dataclasses import asdict, dataclass, field, replace
from typing import Literal, Sequence

from bifuzzy.errors import ConfigInvalid
from bifuzzy.ncfd import IONE, IZERO, IntervalDegree, icomplement, ijoin, imeet, irank_geq, iscale

Mode = Literal["bfdes", "fdes"]
MODES: tuple[Mode, ...] = ("bfdes", "fdes")
ROUTINGS = ("crossed", "literal")
IntervalPair = tuple[IntervalDegree, IntervalDegree]
IntervalMatrix = tuple[tuple[IntervalDegree, IntervalDegree], tuple[IntervalDegree, IntervalDegree]]


@dataclass(frozen=True)
class TrafficConfig:
    """Simulation parameters.  Interval fields hold the BFDES values; the FDES
    mode collapses each of them to its midpoint."""

    duration_s: int = 7200
    lanes_per_approach: int = 2
    t_max: tuple[float, float] = (60.0, 80.0)
    t_bsc: float = 30.0
    t_ext: float = 3.0
    sigma_range: tuple[float, float] = (10.0, 30.0)
    q_max: float = 90.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    saturation_flow: float = 2880.0
    lost_time: float = 4.0
    arrival_rate: float = 1800.0
    noise: float = 0.1
    seed: int = 0
    # "crossed": the red approach's demand feeds the switch event and the green
    # approach's demand feeds the extend event; "literal" routes them the other way
    demand_routing: str = "crossed"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_max", tuple(float(x) for x in self.t_max))
        object.__setattr__(self, "sigma_range", tuple(float(x) for x in self.sigma_range))
        problems = []
        if self.duration_s <= 0:
            problems.append("duration_s must be positive")
        if self.lanes_per_approach <= 0:
            problems.append("lanes_per_approach must be positive")
        if not 0 < self.t_bsc < self.t_max[0] <= self.t_max[1]:
            problems.append("need 0 < t_bsc < t_max lower end <= t_max upper end")
        if self.t_ext <= 0:
            problems.append("t_ext must be positive")
        if not 0 < self.sigma_range[0] <= self.sigma_range[1]:
            problems.append("need 0 < sigma_l <= sigma_h")
        if self.q_max <= 0 or self.saturation_flow <= 0:
            problems.append("q_max and saturation_flow must be positive")
        if self.gamma1 < 0 or self.gamma2 < 0 or self.lost_time < 0 or self.noise < 0:
            problems.append("gamma, lost_time and noise must be non-negative")
        if self.arrival_rate < 0 or self.arrival_rate / 2 > 3600:
            problems.append("arrival_rate must lie in [0, 7200] veh/h")
        if self.demand_routing not in ROUTINGS:
            problems.append(f"demand_routing must be one of {ROUTINGS}")
        if problems:
            raise ConfigInvalid("; ".join(problems))

    def for_mode(self, mode: Mode) -> TrafficConfig:
        """Collapse every interval to its midpoint for the FDES controller."""
        if mode == "bfdes":
            return self
        if mode != "fdes":
            raise ConfigInvalid(f"unknown mode {mode!r}")
        tm = (self.t_max[0] + self.t_max[1]) / 2
        sg = (self.sigma_range[0] + self.sigma_range[1]) / 2
        return replace(self, t_max=(tm, tm), sigma_range=(sg, sg))


def _urgency(t: float, t_bsc: float, t_m: float) -> float:
    return min((t - t_bsc) ** 2 / (t_m - t_bsc) ** 2, 1.0)


def uncontrollability_degree(t_grn: float, cfg: TrafficConfig, mode: Mode = "bfdes") -> IntervalPair:
    """Urgency of switching (σ1) and of extending (σ2) after ``t_grn`` seconds of green."""
    cfg = cfg.for_mode(mode)
    lo_m, hi_m = cfg.t_max
    if t_grn <= cfg.t_bsc:
        s1 = IZERO
    elif t_grn >= hi_m:
        s1 = IONE
    else:
        # the later deadline gives the lower bound
        s1 = IntervalDegree(_urgency(t_grn, cfg.t_bsc, hi_m), _urgency(t_grn, cfg.t_bsc, lo_m))
    return s1, icomplement(s1)


def evaluation(x: float, sigma: float, q_max: float) -> float:
    """Demand for right-of-way as a function of queue length."""
    if x <= 0:
        return 0.0
    if x >= q_max:
        return 1.0
    return math.exp(-((x - q_max) ** 2) / (2 * sigma**2))


def demand_degree(q: IntervalDegree | tuple[float, float], cfg: TrafficConfig, mode: Mode = "bfdes") -> IntervalDegree:
    """Interval image of a queue reading under the lower and upper evaluation functions."""
    cfg = cfg.for_mode(mode)
    lo, hi = (q.lo, q.hi) if isinstance(q, IntervalDegree) else q
    if lo < 0 or hi < lo:
        raise ConfigInvalid(f"bad queue reading [{lo}, {hi}]")
    sl, sh = cfg.sigma_range
    return IntervalDegree(evaluation(lo, sl, cfg.q_max), evaluation(hi, sh, cfg.q_max))


def event_matrices(
    d_grn: IntervalDegree, d_red: IntervalDegree, uc: IntervalPair
) -> tuple[IntervalMatrix, IntervalMatrix]:
    """Switch event fills column 0 and extend event fills column 1, on both rows."""
    a = imeet(d_grn, uc[0])
    b = imeet(d_red, uc[1])
    s1 = ((a, IZERO), (a, IZERO))
    s2 = ((IZERO, b), (IZERO, b))
    return s1, s2


def _ivec_compose(q: IntervalPair, m: IntervalMatrix) -> IntervalPair:
    return tuple(ijoin(imeet(q[0], m[0][j]), imeet(q[1], m[1][j])) for j in range(2))  # type: ignore[return-value]


def decision_step(
    q: IntervalPair, s1: IntervalMatrix, s2: IntervalMatrix, gamma1: float = 1.0, gamma2: float = 1.0
) -> tuple[IntervalPair, Literal["switch", "extend"]]:
    """Advance the decision state; switch when its activation ranks at least as high."""
    v1 = _ivec_compose(q, s1)
    v2 = _ivec_compose(q, s2)
    nxt = tuple(ijoin(iscale(v1[j], gamma1), iscale(v2[j], gamma2)) for j in range(2))
    decision = "switch" if irank_geq(nxt[0], nxt[1]) else "extend"
    return nxt, decision  # type: ignore[return-value]


def noisy_queues(
    q_grn: float, q_red: float, rng: random.Random, mode: Mode = "bfdes", noise: float = 0.1
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Sensor readings: a bracketing interval (BFDES) or a perturbed point (FDES)."""
    out = []
    for q in (q_grn, q_red):
        if mode == "bfdes":
            r1, r2 = rng.random(), rng.random()
            out.append((q * (1 - r1 * noise), q * (1 + r2 * noise)))
        else:
            v = q * (1 + rng.uniform(-1.0, 1.0) * noise)
            out.append((v, v))
    return out[0], out[1]


def interval_reading(q: float, r_low: float, r_high: float, noise: float = 0.1) -> tuple[float, float]:
    return q * (1 - r_low * noise), q * (1 + r_high * noise)


@dataclass
class SimResult:
    mode: str
    arrival_rate: float
    seed: int
    d_avg: float
    total_arrivals: int
    total_departures: int
    final_queues: tuple[int, int]
    total_delay: float
    cycles: int
    per_cycle_queue: list[tuple[int, float]] = field(default_factory=list)
    green_durations: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["final_queues"] = list(self.final_queues)
        d["per_cycle_queue"] = [list(p) for p in self.per_cycle_queue]
        return d


@dataclass
class _Phase:
    green: int = 0
    t_grn: int = 0
    next_decision: float = 0.0
    q: IntervalPair = (IZERO, IONE)
    served_credit: float = 0.0


def run_simulation(cfg: TrafficConfig, mode: Mode = "bfdes") -> SimResult:
    """Second-by-second simulation of one two-hour (by default) run.

    Arrivals are independent per second and per direction.  The green
    approach discharges at the saturation flow after the lost time.  A cycle
    is two consecutive green phases; its queue figure is the mean number of
    waiting vehicles per approach.
    """
    if mode not in MODES:
        raise ConfigInvalid(f"unknown mode {mode!r}")
    mcfg = cfg.for_mode(mode)
    rng = random.Random(cfg.seed)
    sensor_rng = random.Random(cfg.seed * 7919 + 1)
    p_arrive = cfg.arrival_rate / 2 / 3600
    sat = cfg.saturation_flow / 3600
    queues = [0, 0]
    arrivals = departures = 0
    delay = 0.0
    ph = _Phase(next_decision=cfg.t_bsc)
    cycle_sum = 0.0
    cycle_len = 0
    switches = 0
    per_cycle: list[tuple[int, float]] = []
    greens: list[int] = []
    for _ in range(cfg.duration_s):
        for d in (0, 1):
            if rng.random() < p_arrive:
                queues[d] += 1
                arrivals += 1
        if ph.t_grn >= cfg.lost_time:
            ph.served_credit += sat
            k = int(ph.served_credit + 1e-12)
            ph.served_credit -= k
            served = min(k, queues[ph.green])
            queues[ph.green] -= served
            departures += served
        waiting = queues[0] + queues[1]
        delay += waiting
        cycle_sum += waiting / 2
        cycle_len += 1
        ph.t_grn += 1
        if ph.t_grn >= ph.next_decision:
            g, r = noisy_queues(queues[ph.green], queues[1 - ph.green], sensor_rng, mode, cfg.noise)
            uc = uncontrollability_degree(ph.t_grn, mcfg, "bfdes")
            d_grn, d_red = demand_degree(g, mcfg), demand_degree(r, mcfg)
            if cfg.demand_routing == "crossed":
                d_grn, d_red = d_red, d_grn
            s1, s2 = event_matrices(d_grn, d_red, uc)
            ph.q, decision = decision_step(ph.q, s1, s2, cfg.gamma1, cfg.gamma2)
            if decision == "switch":
                greens.append(ph.t_grn)
                ph = _Phase(green=1 - ph.green, next_decision=cfg.t_bsc)
                switches += 1
                if switches % 2 == 0:
                    per_cycle.append((len(per_cycle) + 1, cycle_sum / cycle_len))
                    cycle_sum, cycle_len = 0.0, 0
            else:
                ph.next_decision += cfg.t_ext
    d_avg = delay / arrivals if arrivals else 0.0
    return SimResult(
        mode=mode,
        arrival_rate=cfg.arrival_rate,
        seed=cfg.seed,
        d_avg=d_avg,
        total_arrivals=arrivals,
        total_departures=departures,
        final_queues=(queues[0], queues[1]),
        total_delay=delay,
        cycles=len(per_cycle),
        per_cycle_queue=per_cycle,
        green_durations=greens,
    )


@dataclass
class RateSummary:
    rate: float
    bfdes_mean: float
    bfdes_std: float
    fdes_mean: float
    fdes_std: float
    # mean per-cycle queue series across seeds, truncated to the shortest run
    bfdes_queue: list[float]
    fdes_queue: list[float]


@dataclass
class Comparison:
    rates: list[float]
    seeds: list[int]
    rows: list[RateSummary]
    runs: list[SimResult]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rate", "bfdes_davg", "fdes_davg", "bfdes_std", "fdes_std"])
        for r in self.rows:
            w.writerow([_num(r.rate), f"{r.bfdes_mean:.4f}", f"{r.fdes_mean:.4f}", f"{r.bfdes_std:.4f}", f"{r.fdes_std:.4f}"])
        return buf.getvalue()

    def queue_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rate", "cycle", "bfdes_avg_queue", "fdes_avg_queue"])
        for r in self.rows:
            for i, (b, f) in enumerate(zip(r.bfdes_queue, r.fdes_queue), start=1):
                w.writerow([_num(r.rate), i, f"{b:.4f}", f"{f:.4f}"])
        return buf.getvalue()


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


def _mean_series(results: Sequence[SimResult]) -> list[float]:
    if not results:
        return []
    n = min(len(r.per_cycle_queue) for r in results)
    return [statistics.fmean(r.per_cycle_queue[i][1] for r in results) for i in range(n)]


def compare_controllers(base: TrafficConfig, rates: Sequence[float], seeds: Sequence[int]) -> Comparison:
    """Run both controllers for every rate and seed; summarise delays and queues."""
    if not rates or not seeds:
        raise ConfigInvalid("rates and seeds must be non-empty")
    rows, runs = [], []
    for rate in rates:
        by_mode: dict[str, list[SimResult]] = {}
        for mode in MODES:
            res = [run_simulation(replace(base, arrival_rate=rate, seed=s), mode) for s in seeds]
            by_mode[mode] = res
            runs.extend(res)
        b = [r.d_avg for r in by_mode["bfdes"]]
        f = [r.d_avg for r in by_mode["fdes"]]
        rows.append(
            RateSummary(
                rate=rate,
                bfdes_mean=statistics.fmean(b),
                bfdes_std=statistics.pstdev(b),
                fdes_mean=statistics.fmean(f),
                fdes_std=statistics.pstdev(f),
                bfdes_queue=_mean_series(by_mode["bfdes"]),
                fdes_queue=_mean_series(by_mode["fdes"]),
            )
        )
    return Comparison(list(rates), list(seeds), rows, runs)
