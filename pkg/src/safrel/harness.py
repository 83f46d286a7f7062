"""Experiment scenarios, the random-exploration baseline and CSV reports."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .actions import NO_ACTION, apply_action, enumerate_actions
from .agent import (
    DEFAULT_ENV,
    AdaptiveEpsilon,
    EpisodeResult,
    Environment,
    FixedEpsilon,
    LearningParams,
    QTable,
    TraceStep,
    initial_learning,
    parse_epsilon,
    transfer_learning,
)
from .errors import ConfigError
from .fuzzy import detect_state
from .perfsim import measure
from .policy import load_policy, save_policy
from .sut import ProgramProfile, SensitivityVector, SutInstance, catalog, cpu_intensive, generate_instances, is_breaking_point

SCENARIOS = ("initial-convergence", "homogeneous-transfer", "heterogeneous-transfer", "sensitivity-sweep")
SWEEP_VALUES = (0.1, 0.3, 0.5, 0.7, 0.9)
CONVERGENCE_WINDOW = 10

PER_SUT_COLUMNS = [
    "sut_id", "program", "sen_c", "sen_m", "sen_d", "rt_req_ms",
    "sim_prev1", "sim_prev2", "epsilon_used", "trials", "reached", "baseline_trials",
]
SUMMARY_COLUMNS = [
    "scenario", "epsilon_mode", "safrel_mean", "baseline_mean", "improvement_pct", "frac_below_baseline_mean",
]
SWEEP_COLUMNS = ["parameter", "value", "alpha", "gamma", "safrel_mean", "baseline_mean", "improvement_pct"]
EPISODE_COLUMNS = ["episode", "trials", "reached"]


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "homogeneous-transfer"
    sut_count: int = 50
    seed: int = 0
    learning: LearningParams = LearningParams()
    env: Environment = DEFAULT_ENV
    output_path: Optional[str] = None
    episodes: int = 100  # initial-learning episodes
    initial_epsilon: float = 0.2  # exploration rate used during initial learning
    population: Optional[str] = None  # "cpu" or "mixed"; scenario default when None
    replications: int = 10  # seeds per sensitivity-sweep cell
    profiles: Optional[tuple[ProgramProfile, ...]] = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {SCENARIOS}")
        if self.sut_count < 1 or self.episodes < 1 or self.replications < 1:
            raise ConfigError("sut_count, episodes and replications must be >= 1")
        if self.population not in (None, "cpu", "mixed"):
            raise ConfigError(f"population must be 'cpu' or 'mixed', got {self.population!r}")
        if self.scenario == "initial-convergence" and isinstance(self.learning.epsilon, AdaptiveEpsilon):
            raise ConfigError("adaptive epsilon needs a stream of SUTs; not valid for initial-convergence")
        if not 0.0 <= self.initial_epsilon <= 1.0:
            raise ConfigError("initial_epsilon must lie in [0, 1]")

    @property
    def resolved_population(self) -> str:
        if self.population is not None:
            return self.population
        if self.scenario == "heterogeneous-transfer":
            return "mixed"
        if self.scenario == "sensitivity-sweep" and isinstance(self.learning.epsilon, AdaptiveEpsilon):
            return "mixed"
        return "cpu"

    def to_dict(self) -> dict:
        d = {
            "scenario": self.scenario,
            "sut_count": self.sut_count,
            "seed": self.seed,
            "alpha": self.learning.alpha,
            "gamma": self.learning.gamma,
            "epsilon": str(self.learning.epsilon),
            "max_trials": self.learning.max_trials,
            "tie_break": self.learning.tie_break,
            "beta": self.env.reward.beta,
            "floor": asdict(self.env.floor),
            "membership": asdict(self.env.membership),
            "episodes": self.episodes,
            "initial_epsilon": self.initial_epsilon,
            "population": self.resolved_population,
            "replications": self.replications,
            "output_path": self.output_path,
        }
        if self.profiles is not None:
            d["profiles"] = [[p.name, *p.sensitivity] for p in self.profiles]
        return d


@dataclass
class SutRow:
    sut_id: int
    program: str
    sen_c: float
    sen_m: float
    sen_d: float
    rt_req_ms: float
    sim_prev1: Optional[float]
    sim_prev2: Optional[float]
    epsilon_used: float
    trials: int
    reached: bool
    baseline_trials: int


@dataclass
class SweepCell:
    parameter: str
    value: float
    alpha: float
    gamma: float
    safrel_mean: float
    baseline_mean: float
    improvement_pct: float


@dataclass
class ScenarioReport:
    scenario: str
    epsilon_mode: str
    rows: list[SutRow] = field(default_factory=list)
    episode_trials: list[tuple[int, bool]] = field(default_factory=list)
    sweep: list[SweepCell] = field(default_factory=list)
    safrel_mean: float = math.nan
    baseline_mean: float = math.nan
    improvement_pct: float = math.nan
    frac_below_baseline_mean: float = math.nan
    metadata: dict = field(default_factory=dict, compare=False)
    policy: Optional[QTable] = field(default=None, compare=False, repr=False)

    def __eq__(self, other):
        # NaN aggregates (e.g. a sweep has no per-SUT fraction) must compare equal
        if not isinstance(other, ScenarioReport):
            return NotImplemented
        if (self.scenario, self.epsilon_mode, self.rows, self.episode_trials, self.sweep) != (
            other.scenario, other.epsilon_mode, other.rows, other.episode_trials, other.sweep
        ):
            return False
        return all(_same(getattr(self, k), getattr(other, k)) for k in _AGGREGATES)


_AGGREGATES = ("safrel_mean", "baseline_mean", "improvement_pct", "frac_below_baseline_mean")


def _same(a: float, b: float) -> bool:
    return a == b or (math.isnan(a) and math.isnan(b))


def improvement(safrel_mean: float, baseline_mean: float) -> float:
    return (baseline_mean - safrel_mean) / baseline_mean * 100.0


def summarize_rows(rows: list[SutRow]) -> dict[str, float]:
    safrel = sum(r.trials for r in rows) / len(rows)
    base = sum(r.baseline_trials for r in rows) / len(rows)
    below = sum(1 for r in rows if r.trials < base) / len(rows)
    return {
        "safrel_mean": safrel,
        "baseline_mean": base,
        "improvement_pct": improvement(safrel, base),
        "frac_below_baseline_mean": below,
    }


def run_baseline(
    instance: SutInstance, rng: np.random.Generator, max_trials: int = 200, env: Environment = DEFAULT_ENV
) -> EpisodeResult:
    """Typical stress testing: random applicable reductions, no learning."""
    config = instance.initial_resources
    trace = []
    reached = False
    for _ in range(max_trials):
        choices = [a for a in enumerate_actions(config, env.floor) if a != NO_ACTION]
        if not choices:
            break
        action = choices[int(rng.integers(len(choices)))]
        chosen_in = config
        config = apply_action(config, action, env.floor)
        m = measure(instance, config)
        trace.append(TraceStep(detect_state(m, instance.rt_requirement, env.membership), action, 0.0, chosen_in))
        if is_breaking_point(m.response_time, instance):
            reached = True
            break
    return EpisodeResult(len(trace), reached, config, trace, epsilon=1.0)


def _population(config: ScenarioConfig, seed) -> list[SutInstance]:
    filt = cpu_intensive if config.resolved_population == "cpu" else None
    profiles = list(config.profiles) if config.profiles is not None else None
    return generate_instances(config.sut_count, seed, filt, profiles=profiles, floor=config.env.floor)


def _streams(seed: int):
    gen, agent, base = np.random.SeedSequence(seed).spawn(3)
    return gen, np.random.default_rng(agent), np.random.default_rng(base)


def _transfer(config: ScenarioConfig, seed: int) -> tuple[list[SutRow], QTable]:
    gen_seed, agent_rng, base_rng = _streams(seed)
    suts = _population(config, gen_seed)
    init_params = replace(config.learning, epsilon=FixedEpsilon(config.initial_epsilon))
    q, _ = initial_learning(suts[0], config.episodes, init_params, agent_rng, config.env)
    results = transfer_learning(suts, q, config.learning, agent_rng, config.env)
    rows = []
    for sut, res in zip(suts, results):
        base = run_baseline(sut, base_rng, config.learning.max_trials, config.env)
        sen = sut.sensitivity
        rows.append(
            SutRow(
                sut.sut_id, sut.profile.name, sen.cpu, sen.mem, sen.disk, sut.rt_requirement,
                res.sim_prev1, res.sim_prev2, res.epsilon, res.trials, res.reached_breaking_point, base.trials,
            )
        )
    return rows, q


def _initial(config: ScenarioConfig) -> ScenarioReport:
    gen_seed, agent_rng, base_rng = _streams(config.seed)
    sut = _population(replace(config, sut_count=1), gen_seed)[0]
    q, results = initial_learning(sut, config.episodes, config.learning, agent_rng, config.env)
    baselines = [run_baseline(sut, base_rng, config.learning.max_trials, config.env) for _ in range(config.episodes)]
    sen = sut.sensitivity
    last = results[-1]
    row = SutRow(
        sut.sut_id, sut.profile.name, sen.cpu, sen.mem, sen.disk, sut.rt_requirement,
        None, None, last.epsilon, last.trials, last.reached_breaking_point, baselines[-1].trials,
    )
    window = results[-CONVERGENCE_WINDOW:]
    safrel = sum(r.trials for r in window) / len(window)
    base = sum(b.trials for b in baselines) / len(baselines)
    below = sum(1 for r in window if r.trials < base) / len(window)
    return ScenarioReport(
        config.scenario, str(config.learning.epsilon), [row],
        episode_trials=[(r.trials, r.reached_breaking_point) for r in results],
        safrel_mean=safrel, baseline_mean=base, improvement_pct=improvement(safrel, base),
        frac_below_baseline_mean=below, policy=q,
    )


def _sweep(config: ScenarioConfig) -> ScenarioReport:
    cells = []
    grid = [("alpha", v, v, 0.5) for v in SWEEP_VALUES] + [("gamma", v, 0.1, v) for v in SWEEP_VALUES]
    for parameter, value, alpha, gamma in grid:
        learning = replace(config.learning, alpha=alpha, gamma=gamma)
        safrel, base = [], []
        for rep in range(config.replications):
            rows, _ = _transfer(replace(config, learning=learning), config.seed + rep)
            s = summarize_rows(rows)
            safrel.append(s["safrel_mean"])
            base.append(s["baseline_mean"])
        sm, bm = sum(safrel) / len(safrel), sum(base) / len(base)
        cells.append(SweepCell(parameter, value, alpha, gamma, sm, bm, improvement(sm, bm)))
    sm = sum(c.safrel_mean for c in cells) / len(cells)
    bm = sum(c.baseline_mean for c in cells) / len(cells)
    return ScenarioReport(
        config.scenario, str(config.learning.epsilon), sweep=cells,
        safrel_mean=sm, baseline_mean=bm, improvement_pct=improvement(sm, bm),
    )


def run_scenario(config: ScenarioConfig) -> ScenarioReport:
    if config.scenario == "initial-convergence":
        report = _initial(config)
    elif config.scenario == "sensitivity-sweep":
        report = _sweep(config)
    else:
        rows, q = _transfer(config, config.seed)
        report = ScenarioReport(config.scenario, str(config.learning.epsilon), rows, policy=q, **summarize_rows(rows))
    report.metadata = config.to_dict()
    return report


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, columns: list[str], records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for rec in records:
            w.writerow([_fmt(rec[c]) for c in columns])


def emit_report(report: ScenarioReport, path) -> Path:
    """Write per_sut.csv, summary.csv and metadata.json (plus episodes.csv / sweep.csv when present)."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "per_sut.csv", PER_SUT_COLUMNS, (asdict(r) for r in report.rows))
    summary = {c: getattr(report, c) for c in _AGGREGATES}
    summary.update(scenario=report.scenario, epsilon_mode=report.epsilon_mode)
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, [summary])
    if report.episode_trials:
        _write_csv(
            out / "episodes.csv",
            EPISODE_COLUMNS,
            ({"episode": i, "trials": t, "reached": r} for i, (t, r) in enumerate(report.episode_trials)),
        )
    if report.sweep:
        _write_csv(out / "sweep.csv", SWEEP_COLUMNS, (asdict(c) for c in report.sweep))
    with open(out / "metadata.json", "w") as fh:
        json.dump(report.metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if report.policy is not None:
        m = report.metadata
        params = LearningParams(alpha=m.get("alpha", 0.1), gamma=m.get("gamma", 0.5)) if m else None
        profiles = None
        if m.get("profiles"):
            profiles = [ProgramProfile(n, SensitivityVector(c, mm, d)) for n, c, mm, d in m["profiles"]]
        save_policy(report.policy, out / "policy.csv", params, profiles)
    return out


def _opt_float(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def _bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"bad boolean {text!r}")
    return text == "true"


def _read_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def load_report(path) -> ScenarioReport:
    """Parse a directory written by `emit_report` back into a ScenarioReport."""
    src = Path(path)
    (summary,) = _read_csv(src / "summary.csv")
    rows = [
        SutRow(
            int(r["sut_id"]), r["program"], float(r["sen_c"]), float(r["sen_m"]), float(r["sen_d"]),
            float(r["rt_req_ms"]), _opt_float(r["sim_prev1"]), _opt_float(r["sim_prev2"]),
            float(r["epsilon_used"]), int(r["trials"]), _bool(r["reached"]), int(r["baseline_trials"]),
        )
        for r in _read_csv(src / "per_sut.csv")
    ]
    episodes = []
    if (src / "episodes.csv").exists():
        episodes = [(int(r["trials"]), _bool(r["reached"])) for r in _read_csv(src / "episodes.csv")]
    sweep = []
    if (src / "sweep.csv").exists():
        sweep = [
            SweepCell(r["parameter"], *(float(r[c]) for c in SWEEP_COLUMNS[1:]))
            for r in _read_csv(src / "sweep.csv")
        ]
    metadata = {}
    if (src / "metadata.json").exists():
        metadata = json.loads((src / "metadata.json").read_text())
    policy = load_policy(src / "policy.csv") if (src / "policy.csv").exists() else None
    return ScenarioReport(
        summary["scenario"], summary["epsilon_mode"], rows, episodes, sweep,
        **{c: float(summary[c]) for c in _AGGREGATES}, metadata=metadata, policy=policy,
    )
