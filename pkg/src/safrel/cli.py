"""Command-line entry point: ``safrel <scenario> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .actions import RewardParams
from .agent import Environment, LearningParams, parse_epsilon
from .errors import SafrelError
from .fuzzy import MembershipConfig
from .harness import SCENARIOS, ScenarioConfig, emit_report, run_scenario
from .sut import load_catalog

log = logging.getLogger("safrel")

DEFAULT_EPSILON = {
    "initial-convergence": "fixed:0.2",
    "homogeneous-transfer": "fixed:0.2",
    "heterogeneous-transfer": "adaptive",
    "sensitivity-sweep": "fixed:0.2",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="safrel", description="Fuzzy RL performance-test generation experiments.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--suts", type=int, default=50, help="number of SUT instances (default 50)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--epsilon", help="fixed:<v> | decaying | adaptive (default depends on scenario)")
    p.add_argument("--beta", type=float, default=RewardParams().beta)
    p.add_argument("--episodes", type=int, default=100, help="initial-learning episodes")
    p.add_argument("--max-trials", type=int, default=200)
    p.add_argument("--tie-break", choices=("random", "first"), default="random", help="greedy tie rule")
    p.add_argument("--population", choices=("cpu", "mixed"), help="SUT population (default depends on scenario)")
    p.add_argument("--replications", type=int, default=10, help="seeds per sensitivity-sweep cell")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--catalog", help="CSV catalog file: name,sen_c,sen_m,sen_d")
    p.add_argument("--membership", help="JSON file overriding membership breakpoints")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    epsilon = parse_epsilon(args.epsilon or DEFAULT_EPSILON[args.scenario])
    membership = MembershipConfig.from_json(args.membership) if args.membership else MembershipConfig()
    try:
        env = Environment(reward=RewardParams(args.beta), membership=membership)
        learning = LearningParams(args.alpha, args.gamma, epsilon, args.max_trials, args.tie_break)
    except ValueError as exc:
        raise SafrelError(str(exc)) from exc
    profiles = tuple(load_catalog(args.catalog)) if args.catalog else None
    return ScenarioConfig(
        scenario=args.scenario,
        sut_count=args.suts,
        seed=args.seed,
        learning=learning,
        env=env,
        output_path=args.out,
        episodes=args.episodes,
        population=args.population,
        replications=args.replications,
        profiles=profiles,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        config = config_from_args(args)
        report = run_scenario(config)
        out = emit_report(report, args.out)
    except (SafrelError, OSError) as exc:
        log.error("error: %s", exc)
        return 2
    log.info(
        "%s [%s]: safrel_mean=%.2f baseline_mean=%.2f improvement=%.1f%% below_baseline_mean=%.0f%%",
        report.scenario, report.epsilon_mode, report.safrel_mean, report.baseline_mean,
        report.improvement_pct, 100 * report.frac_below_baseline_mean,
    )
    for cell in report.sweep:
        log.info("  %s=%.1f  safrel_mean=%.2f baseline_mean=%.2f", cell.parameter, cell.value,
                 cell.safrel_mean, cell.baseline_mean)
    log.info("wrote %s", out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
