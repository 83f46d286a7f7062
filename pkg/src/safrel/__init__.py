"""Fuzzy Q-learning agent that drives a simulated SUT to its performance breaking point."""

from .actions import ACTIONS, NO_ACTION, Action, RewardParams, apply_action, compute_reward, enumerate_actions
from .agent import (
    AdaptiveEpsilon,
    DecayingEpsilon,
    EpisodeResult,
    Environment,
    FixedEpsilon,
    LearningParams,
    QTable,
    adapt_epsilon,
    cosine_similarity,
    initial_learning,
    run_episode,
    select_action,
    transfer_learning,
    update_q,
)
from .fuzzy import FuzzyState, MembershipConfig, build_rule_base, detect_state, fuzzify, infer_state, normalize
from .harness import ScenarioConfig, ScenarioReport, emit_report, load_report, run_baseline, run_scenario
from .perfsim import QualityMeasurement, measure, response_time, throughput, utilization_improvements
from .policy import load_policy, save_policy
from .sut import (
    ProgramProfile,
    ResourceConfig,
    SensitivityVector,
    SutInstance,
    catalog,
    generate_instances,
    is_breaking_point,
)

__version__ = "0.1.0"
