"""Simulated SUT performance under a granted resource configuration.

Throughput follows a sensitivity-weighted share of the demanded resources
scaled by the nominal throughput; response time is its reciprocal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sut import ResourceConfig, SutInstance

UTILIZATION_CAP = 4.0


@dataclass(frozen=True)
class QualityMeasurement:
    response_time: float  # ms
    cpu_util_improvement: float
    mem_util_improvement: float
    disk_util_improvement: float

    @property
    def improvements(self) -> tuple[float, float, float]:
        return (self.cpu_util_improvement, self.mem_util_improvement, self.disk_util_improvement)


def throughput_factor(instance: SutInstance, granted: ResourceConfig) -> float:
    """Fraction of nominal throughput achieved with `granted` resources."""
    sen = instance.sensitivity
    init = instance.initial_resources
    weighted = (
        min(granted.cpu / init.cpu, 1.0) * sen.cpu
        + min(granted.mem / init.mem, 1.0) * sen.mem
        + min(granted.disk / init.disk, 1.0) * sen.disk
    )
    return weighted / sen.total


def throughput(instance: SutInstance, granted: ResourceConfig) -> float:
    """Requests per millisecond."""
    return throughput_factor(instance, granted) / instance.nominal_rt


def response_time(instance: SutInstance, granted: ResourceConfig) -> float:
    """Milliseconds; the reciprocal of `throughput`."""
    return instance.nominal_rt / throughput_factor(instance, granted)


def utilization_improvements(instance: SutInstance, granted: ResourceConfig) -> tuple[float, float, float]:
    # utilization scales inversely with capacity and saturates at 4x the initial level
    return tuple(min(i / g, UTILIZATION_CAP) for i, g in zip(instance.initial_resources, granted))


def measure(instance: SutInstance, granted: ResourceConfig) -> QualityMeasurement:
    return QualityMeasurement(response_time(instance, granted), *utilization_improvements(instance, granted))
