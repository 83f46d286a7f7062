"""Resource-reduction actions and the reward signal."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InapplicableAction
from .perfsim import QualityMeasurement
from .sut import DEFAULT_FLOOR, ResourceConfig, SutInstance

QUARTERS = (1, 2, 3, 4)


@dataclass(frozen=True)
class Action:
    kind: str  # "none", "cpu", "mem" or "disk"
    step: int = 0  # quarter-steps, 1..4

    @property
    def name(self) -> str:
        if self.kind == "none":
            return "NoAction"
        return f"Reduce{self.kind.capitalize()}({self.step})"

    def __str__(self):
        return self.name


NO_ACTION = Action("none")
ACTIONS: tuple[Action, ...] = (NO_ACTION,) + tuple(
    Action(kind, q) for kind in ("cpu", "mem", "disk") for q in QUARTERS
)
ACTION_INDEX = {a: i for i, a in enumerate(ACTIONS)}
ACTION_BY_NAME = {a.name: a for a in ACTIONS}


def _reduced(current: ResourceConfig, a: Action) -> tuple[float, float, float]:
    cpu, mem, disk = current
    if a.kind == "cpu":
        cpu = cpu - a.step / 4
    elif a.kind == "mem":
        mem = mem - (a.step / 4) * (mem / 4)
    elif a.kind == "disk":
        disk = disk - (a.step / 4) * (disk / 4)
    return cpu, mem, disk


def _allowed(current: ResourceConfig, a: Action, floor: ResourceConfig) -> bool:
    return all(v >= f for v, f in zip(_reduced(current, a), floor))


def enumerate_actions(current: ResourceConfig, floor: ResourceConfig = DEFAULT_FLOOR) -> list[Action]:
    """Actions that keep every resource at or above `floor`, in canonical order."""
    return [a for a in ACTIONS if _allowed(current, a, floor)]


def apply_action(current: ResourceConfig, a: Action, floor: ResourceConfig = DEFAULT_FLOOR) -> ResourceConfig:
    if a == NO_ACTION:
        return current
    if not _allowed(current, a, floor):
        raise InapplicableAction(f"{a} would push {current} below floor {floor}")
    cpu, mem, disk = _reduced(current, a)
    return replace(current, cpu=cpu, mem=mem, disk=disk)


def most_reduced(current: ResourceConfig, floor: ResourceConfig = DEFAULT_FLOOR) -> ResourceConfig:
    """Smallest configuration reachable from `current` by repeated actions.

    CPU goes down in quarter cores, memory and disk shrink geometrically, so
    the result lies within one step of the floor in every component.
    """
    steps = math.floor((current.cpu - floor.cpu) * 4 + 1e-9)
    cpu = current.cpu - max(steps, 0) / 4
    while cpu < floor.cpu:  # guard against rounding in the step count
        cpu += 0.25

    def shrink(v, f):
        for q in reversed(QUARTERS):
            factor = 1 - q / 16
            while v * factor >= f:
                v *= factor
        return v

    return ResourceConfig(cpu, shrink(current.mem, floor.mem), shrink(current.disk, floor.disk))


@dataclass(frozen=True)
class RewardParams:
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")


def response_time_utility(response_time: float, instance: SutInstance) -> float:
    """0 up to the requirement, rising linearly to 1 at the breaking threshold, then held at 1."""
    rt_q = instance.rt_requirement
    if response_time <= rt_q:
        return 0.0
    return min((response_time - rt_q) / (instance.breaking_rt - rt_q), 1.0)


def resource_utility(m: QualityMeasurement, instance: SutInstance) -> float:
    sen = instance.sensitivity
    return sen.cpu * m.cpu_util_improvement + sen.mem * m.mem_util_improvement + sen.disk * m.disk_util_improvement


def compute_reward(m: QualityMeasurement, instance: SutInstance, params: RewardParams = RewardParams()) -> float:
    return params.beta * response_time_utility(m.response_time, instance) + (1 - params.beta) * resource_utility(
        m, instance
    )


def max_reward(instance: SutInstance, params: RewardParams = RewardParams(), cap: float = 4.0) -> float:
    """Upper bound on `compute_reward` given improvements capped at `cap`."""
    return params.beta + (1 - params.beta) * cap * instance.sensitivity.total
