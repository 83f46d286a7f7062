"""Fuzzy state detection: normalization, fuzzification and rule inference.

Four inputs are classified: CPU, memory and disk utilization improvement
(terms High/Low each) and response time (High/Normal/Low). Each of the 24
term combinations is one rule whose consequent is the state of the same
name, e.g. ``HHLN``. Rule support is the min over its antecedent
memberships and the state is the rule with maximum support.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass
from typing import Mapping

from .errors import DegenerateInput, NonPositiveInput
from .perfsim import QualityMeasurement

VARIABLES = ("CUI", "MUI", "DUI", "RT")
UTIL_TERMS = ("H", "L")
RT_TERMS = ("H", "N", "L")
TERMS = {"CUI": UTIL_TERMS, "MUI": UTIL_TERMS, "DUI": UTIL_TERMS, "RT": RT_TERMS}

Memberships = Mapping[str, Mapping[str, float]]


@dataclass(frozen=True)
class NormalizedMeasurement:
    rt: float
    cui: float
    mui: float
    dui: float


@dataclass(frozen=True)
class FuzzyState:
    label: str
    membership: float


@dataclass(frozen=True)
class Rule:
    antecedent: tuple[str, str, str, str]
    label: str


@dataclass(frozen=True)
class MembershipConfig:
    """Breakpoints of the piecewise-linear membership functions.

    Response time: Low is 1 up to ``rt_low`` and falls to 0 at ``rt_mid``;
    Normal is the triangle (rt_low, rt_mid, rt_high); High rises from 0 at
    ``rt_mid`` to 1 at ``rt_high``. Utilization (on the normalized
    reciprocal, so small values mean a large improvement): High is 1 up to
    ``util_high`` and falls to 0 at ``util_low``; Low is the complement.
    """

    rt_low: float = 0.3
    rt_mid: float = 0.5
    rt_high: float = 0.7
    util_high: float = 0.4
    util_low: float = 0.6

    def __post_init__(self):
        if not 0.0 <= self.rt_low < self.rt_mid < self.rt_high <= 1.0:
            raise ValueError("need 0 <= rt_low < rt_mid < rt_high <= 1")
        if not 0.0 <= self.util_high < self.util_low <= 1.0:
            raise ValueError("need 0 <= util_high < util_low <= 1")

    @classmethod
    def from_json(cls, path) -> "MembershipConfig":
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown membership keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2)


DEFAULT_MEMBERSHIP = MembershipConfig()


def build_rule_base() -> tuple[Rule, ...]:
    rules = []
    for combo in itertools.product(*(TERMS[v] for v in VARIABLES)):
        rules.append(Rule(combo, "".join(combo)))
    return tuple(rules)


RULES = build_rule_base()
STATE_LABELS = tuple(r.label for r in RULES)
STATE_INDEX = {label: i for i, label in enumerate(STATE_LABELS)}


def normalize(m: QualityMeasurement, rt_requirement: float) -> NormalizedMeasurement:
    values = (m.response_time, *m.improvements, rt_requirement)
    if any(not v > 0 for v in values):
        raise NonPositiveInput(f"measurement values must be positive: {values}")
    rt = (2.0 / math.pi) * math.atan(m.response_time / rt_requirement)
    cui, mui, dui = (min(1.0 / x, 1.0) for x in m.improvements)
    return NormalizedMeasurement(rt, cui, mui, dui)


def _ramp(x: float, lo: float, hi: float) -> float:
    """0 below lo, 1 above hi, linear in between."""
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0
    return (x - lo) / (hi - lo)


def rt_memberships(x: float, cfg: MembershipConfig = DEFAULT_MEMBERSHIP) -> dict[str, float]:
    low = 1.0 - _ramp(x, cfg.rt_low, cfg.rt_mid)
    high = _ramp(x, cfg.rt_mid, cfg.rt_high)
    if x <= cfg.rt_mid:
        normal = 1.0 - low
    else:
        normal = 1.0 - high
    return {"H": high, "N": normal, "L": low}


def util_memberships(x: float, cfg: MembershipConfig = DEFAULT_MEMBERSHIP) -> dict[str, float]:
    low = _ramp(x, cfg.util_high, cfg.util_low)
    return {"H": 1.0 - low, "L": low}


def fuzzify(n: NormalizedMeasurement, cfg: MembershipConfig = DEFAULT_MEMBERSHIP) -> dict[str, dict[str, float]]:
    return {
        "CUI": util_memberships(n.cui, cfg),
        "MUI": util_memberships(n.mui, cfg),
        "DUI": util_memberships(n.dui, cfg),
        "RT": rt_memberships(n.rt, cfg),
    }


def infer_state(memberships: Memberships, rules: tuple[Rule, ...] = RULES) -> FuzzyState:
    # min implication on a singleton consequent keeps the support as the
    # state's degree, so the winning rule's support is the membership
    best = None
    best_support = 0.0
    for rule in rules:
        support = min(memberships[var][term] for var, term in zip(VARIABLES, rule.antecedent))
        if support > best_support:
            best, best_support = rule, support
    if best is None:
        raise DegenerateInput("all rule supports are zero")
    return FuzzyState(best.label, best_support)


def detect_state(
    m: QualityMeasurement, rt_requirement: float, cfg: MembershipConfig = DEFAULT_MEMBERSHIP
) -> FuzzyState:
    return infer_state(fuzzify(normalize(m, rt_requirement), cfg))
