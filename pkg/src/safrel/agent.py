"""Fuzzy Q-learning agent with policy reuse across SUTs.

A learning session owns one QTable and one random generator and is meant to
be driven from a single thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .actions import ACTION_INDEX, ACTIONS, Action, RewardParams, apply_action, compute_reward, enumerate_actions
from .errors import ConfigError, EmptyActionSet, ZeroVector
from .fuzzy import DEFAULT_MEMBERSHIP, STATE_INDEX, STATE_LABELS, FuzzyState, MembershipConfig, detect_state
from .perfsim import measure
from .sut import DEFAULT_FLOOR, ResourceConfig, SensitivityVector, SutInstance, is_breaking_point

SIMILARITY_THRESHOLD = 0.8
EXPLOIT_EPSILON = 0.2
EXPLORE_EPSILON = 0.5


class QTable:
    """State-action utilities over the 24 fuzzy states and 13 actions."""

    def __init__(self, values: Optional[np.ndarray] = None):
        if values is None:
            values = np.zeros((len(STATE_LABELS), len(ACTIONS)))
        values = np.array(values, dtype=float)
        if values.shape != (len(STATE_LABELS), len(ACTIONS)):
            raise ValueError(f"q-table shape must be {(len(STATE_LABELS), len(ACTIONS))}, got {values.shape}")
        self.values = values

    def __getitem__(self, key: tuple[str, Action]) -> float:
        label, action = key
        return float(self.values[STATE_INDEX[label], ACTION_INDEX[action]])

    def __setitem__(self, key: tuple[str, Action], value: float):
        label, action = key
        self.values[STATE_INDEX[label], ACTION_INDEX[action]] = value

    def row_max(self, label: str) -> float:
        return float(self.values[STATE_INDEX[label]].max())

    def copy(self) -> "QTable":
        return QTable(self.values.copy())

    def __eq__(self, other):
        return isinstance(other, QTable) and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"QTable(nonzero={int(np.count_nonzero(self.values))})"


@dataclass(frozen=True)
class FixedEpsilon:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ConfigError(f"epsilon {self.value} outside [0, 1]")

    def __str__(self):
        return f"fixed:{self.value:g}"


@dataclass(frozen=True)
class DecayingEpsilon:
    start: float = 0.85
    rate: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.start <= 1.0 or self.rate < 0:
            raise ConfigError("decaying epsilon needs start in [0, 1] and rate >= 0")

    def at(self, t: int) -> float:
        return self.start / (1.0 + self.rate * t)

    def __str__(self):
        return "decaying"


@dataclass(frozen=True)
class AdaptiveEpsilon:
    def __str__(self):
        return "adaptive"


EpsilonMode = Union[FixedEpsilon, DecayingEpsilon, AdaptiveEpsilon]


def parse_epsilon(text: str) -> EpsilonMode:
    """Parse ``fixed:<v>``, ``decaying`` (optionally ``decaying:<start>:<rate>``) or ``adaptive``."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "fixed":
            return FixedEpsilon(float(rest))
        if kind == "decaying":
            if rest:
                start, rate = rest.split(":")
                return DecayingEpsilon(float(start), float(rate))
            return DecayingEpsilon()
        if kind == "adaptive" and not rest:
            return AdaptiveEpsilon()
    except ValueError as exc:
        raise ConfigError(f"bad epsilon spec {text!r}: {exc}") from exc
    raise ConfigError(f"bad epsilon spec {text!r}")


TIE_BREAKS = ("random", "first")


@dataclass(frozen=True)
class LearningParams:
    alpha: float = 0.1
    gamma: float = 0.5
    epsilon: EpsilonMode = FixedEpsilon(0.2)
    max_trials: int = 200
    tie_break: str = "random"  # or "first": earliest action in catalog order

    def __post_init__(self):
        if self.tie_break not in TIE_BREAKS:
            raise ConfigError(f"tie_break must be one of {TIE_BREAKS}")
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.gamma <= 1.0):
            raise ConfigError("alpha and gamma must lie in [0, 1]")
        if self.max_trials < 0:
            raise ConfigError("max_trials must be non-negative")


@dataclass(frozen=True)
class Environment:
    """Simulator-side settings shared by the agent and the baseline."""

    reward: RewardParams = RewardParams()
    floor: ResourceConfig = DEFAULT_FLOOR
    membership: MembershipConfig = DEFAULT_MEMBERSHIP


DEFAULT_ENV = Environment()


@dataclass(frozen=True)
class TraceStep:
    state: FuzzyState
    action: Action
    reward: float
    config: ResourceConfig  # configuration the action was chosen in


@dataclass
class EpisodeResult:
    trials: int
    reached_breaking_point: bool
    final_config: ResourceConfig
    trace: list[TraceStep] = field(default_factory=list)
    epsilon: float = 0.0
    sim_prev1: Optional[float] = None
    sim_prev2: Optional[float] = None


def select_action(
    q: QTable,
    s: FuzzyState,
    applicable: Sequence[Action],
    epsilon: float,
    rng: np.random.Generator,
    tie_break: str = "random",
) -> Action:
    """Epsilon-greedy choice among the applicable actions.

    Greedy ties go to a uniformly drawn candidate, or with tie_break="first"
    to the earliest action in catalog order.
    """
    if not applicable:
        raise EmptyActionSet("no applicable action")
    if epsilon > 0 and rng.random() < epsilon:
        return applicable[int(rng.integers(len(applicable)))]
    row = q.values[STATE_INDEX[s.label]]
    vals = [row[ACTION_INDEX[a]] for a in applicable]
    top = max(vals)
    best = [a for a, v in zip(applicable, vals) if v == top]
    if tie_break == "first":
        return best[0]
    return best[int(rng.integers(len(best)))]


def update_q(q: QTable, s: FuzzyState, a: Action, reward: float, s_next: FuzzyState, params: LearningParams) -> float:
    """Membership-weighted Q-learning update of cell (s, a); returns the new value."""
    target = reward + params.gamma * q.row_max(s_next.label)
    new = s.membership * ((1 - params.alpha) * q[s.label, a] + params.alpha * target)
    q[s.label, a] = new
    return new


def cosine_similarity(a: SensitivityVector, b: SensitivityVector) -> float:
    va, vb = tuple(a), tuple(b)
    na = math.sqrt(sum(x * x for x in va))
    nb = math.sqrt(sum(x * x for x in vb))
    if na == 0 or nb == 0:
        raise ZeroVector("cosine similarity of a zero vector")
    return sum(x * y for x, y in zip(va, vb)) / (na * nb)


def adapt_epsilon(sim_prev1: Optional[float], sim_prev2: Optional[float] = None) -> float:
    """Exploit (0.2) only when the SUT resembles both of its two predecessors."""
    if sim_prev1 is not None and sim_prev1 >= SIMILARITY_THRESHOLD:
        if sim_prev2 is not None and sim_prev2 >= SIMILARITY_THRESHOLD:
            return EXPLOIT_EPSILON
    return EXPLORE_EPSILON


def run_episode(
    instance: SutInstance,
    q: QTable,
    params: LearningParams,
    epsilon: float,
    rng: np.random.Generator,
    env: Environment = DEFAULT_ENV,
) -> EpisodeResult:
    config = instance.initial_resources
    m = measure(instance, config)
    state = detect_state(m, instance.rt_requirement, env.membership)
    trace = []
    reached = False
    for _ in range(params.max_trials):
        applicable = enumerate_actions(config, env.floor)
        action = select_action(q, state, applicable, epsilon, rng, params.tie_break)
        chosen_in = config
        config = apply_action(config, action, env.floor)
        m = measure(instance, config)
        next_state = detect_state(m, instance.rt_requirement, env.membership)
        reward = compute_reward(m, instance, env.reward)
        update_q(q, state, action, reward, next_state, params)
        trace.append(TraceStep(state, action, reward, chosen_in))
        if is_breaking_point(m.response_time, instance):
            reached = True
            break
        state = next_state
    return EpisodeResult(len(trace), reached, config, trace, epsilon)


def _scheduled_epsilon(mode: EpsilonMode, t: int) -> float:
    if isinstance(mode, FixedEpsilon):
        return mode.value
    if isinstance(mode, DecayingEpsilon):
        return mode.at(t)
    raise ConfigError("adaptive epsilon needs a SUT stream; use transfer_learning")


def initial_learning(
    instance: SutInstance,
    episodes: int,
    params: LearningParams,
    rng: np.random.Generator,
    env: Environment = DEFAULT_ENV,
    q: Optional[QTable] = None,
) -> tuple[QTable, list[EpisodeResult]]:
    """Repeat episodes on one SUT, carrying the Q-table forward."""
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    q = QTable() if q is None else q
    results = [run_episode(instance, q, params, _scheduled_epsilon(params.epsilon, t), rng, env) for t in range(episodes)]
    return q, results


def transfer_learning(
    suts: Sequence[SutInstance],
    q: QTable,
    params: LearningParams,
    rng: np.random.Generator,
    env: Environment = DEFAULT_ENV,
) -> list[EpisodeResult]:
    """One episode per SUT, reusing and continually updating `q`.

    In adaptive mode epsilon is re-chosen per SUT from its similarity to the
    previous one and two SUTs of the stream.
    """
    results = []
    for k, sut in enumerate(suts):
        sim1 = cosine_similarity(sut.sensitivity, suts[k - 1].sensitivity) if k >= 1 else None
        sim2 = cosine_similarity(sut.sensitivity, suts[k - 2].sensitivity) if k >= 2 else None
        if isinstance(params.epsilon, AdaptiveEpsilon):
            eps = adapt_epsilon(sim1, sim2)
        else:
            eps = _scheduled_epsilon(params.epsilon, k)
        res = run_episode(sut, q, params, eps, rng, env)
        res.sim_prev1, res.sim_prev2 = sim1, sim2
        results.append(res)
    return results
