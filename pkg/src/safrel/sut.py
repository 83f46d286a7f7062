"""Programs, SUT instances and the breaking-point predicate."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import EmptyCatalog

CPU_RANGE = (1.0, 10.0)  # cores
MEM_RANGE = (1.0, 50.0)  # GB
DISK_RANGE = (100.0, 1000.0)  # GB
RT_REQUIREMENT_RANGE = (500.0, 3000.0)  # ms
BREAKING_MULTIPLIER = 1.5
NOMINAL_RT_FRACTION = 0.5


@dataclass(frozen=True)
class SensitivityVector:
    cpu: float
    mem: float
    disk: float

    def __post_init__(self):
        for v in self:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"sensitivity component {v} outside [0, 1]")
        if not any(v > 0 for v in self):
            raise ValueError("sensitivity vector must be nonzero")

    def __iter__(self):
        return iter((self.cpu, self.mem, self.disk))

    @property
    def total(self) -> float:
        return self.cpu + self.mem + self.disk


@dataclass(frozen=True)
class ProgramProfile:
    name: str
    sensitivity: SensitivityVector


@dataclass(frozen=True)
class ResourceConfig:
    cpu: float  # cores
    mem: float  # GB
    disk: float  # GB

    def __post_init__(self):
        if not (self.cpu > 0 and self.mem > 0 and self.disk > 0):
            raise ValueError(f"resources must be strictly positive: {self}")

    def __iter__(self):
        return iter((self.cpu, self.mem, self.disk))

    def dominates(self, other: "ResourceConfig") -> bool:
        """True if every component is >= the matching component of `other`."""
        return all(a >= b for a, b in zip(self, other))


DEFAULT_FLOOR = ResourceConfig(cpu=0.25, mem=0.25, disk=1.0)


@dataclass(frozen=True)
class SutInstance:
    profile: ProgramProfile
    initial_resources: ResourceConfig
    rt_requirement: float  # ms
    nominal_rt: float  # ms, 1 / nominal throughput
    breaking_multiplier: float = BREAKING_MULTIPLIER
    sut_id: int = field(default=0, compare=True)

    def __post_init__(self):
        if self.rt_requirement <= 0 or self.nominal_rt <= 0:
            raise ValueError("response times must be positive")
        if self.breaking_multiplier <= 1.0:
            raise ValueError("breaking multiplier must exceed 1")

    @property
    def sensitivity(self) -> SensitivityVector:
        return self.profile.sensitivity

    @property
    def breaking_rt(self) -> float:
        return self.breaking_multiplier * self.rt_requirement


def is_breaking_point(measured_rt: float, instance: SutInstance) -> bool:
    return measured_rt > instance.breaking_rt


_TABLE = [
    ("Build-apache", 0.96, 0.04, 0.00),
    ("n-queens", 0.97, 0.00, 0.00),
    ("John-the-ripper", 0.96, 0.00, 0.00),
    ("Apache", 0.97, 0.03, 0.00),
    ("Dcraw", 0.48, 0.04, 0.00),
    ("X264", 0.41, 0.02, 0.00),
    ("Unpack-linux", 0.18, 0.09, 0.35),
    ("Build-php", 0.97, 0.07, 0.00),
    ("Blogbench", 0.11, 0.81, 0.18),
    ("Bork", 0.00, 0.53, 0.20),
    ("Compress-gzip", 0.00, 0.00, 0.47),
    ("Aio-stress", 0.00, 0.30, 0.80),
]

CPU_INTENSIVE = frozenset(
    ["Build-apache", "n-queens", "John-the-ripper", "Apache", "Dcraw", "Build-php", "X264"]
)


def _make_catalog(rows: Iterable[tuple]) -> list[ProgramProfile]:
    profiles = []
    seen = set()
    for name, c, m, d in rows:
        if name in seen:
            raise ValueError(f"duplicate program name {name!r}")
        seen.add(name)
        profiles.append(ProgramProfile(name, SensitivityVector(float(c), float(m), float(d))))
    return profiles


def catalog() -> list[ProgramProfile]:
    """The twelve benchmark programs with their (cpu, mem, disk) sensitivities."""
    return _make_catalog(_TABLE)


def load_catalog(path) -> list[ProgramProfile]:
    """Read a catalog CSV with columns name, sen_c, sen_m, sen_d.

    Blank lines and lines starting with '#' are ignored; a header row whose
    first cell is 'name' is skipped.
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(line for line in fh if line.strip() and not line.startswith("#")):
            if rec[0].strip() == "name":
                continue
            if len(rec) != 4:
                raise ValueError(f"catalog record needs 4 fields, got {rec!r}")
            rows.append((rec[0].strip(), *(float(x) for x in rec[1:])))
    return _make_catalog(rows)


def save_catalog(profiles: Iterable[ProgramProfile], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "sen_c", "sen_m", "sen_d"])
        for p in profiles:
            w.writerow([p.name, *(repr(v) for v in p.sensitivity)])


def catalog_hash(profiles: Iterable[ProgramProfile]) -> str:
    h = hashlib.sha256()
    for p in profiles:
        h.update(f"{p.name},{p.sensitivity.cpu!r},{p.sensitivity.mem!r},{p.sensitivity.disk!r}\n".encode())
    return h.hexdigest()


def cpu_intensive(profile: ProgramProfile) -> bool:
    return profile.name in CPU_INTENSIVE


def generate_instances(
    count: int,
    seed,
    filter: Optional[Callable[[ProgramProfile], bool]] = None,
    profiles: Optional[list[ProgramProfile]] = None,
    floor: ResourceConfig = DEFAULT_FLOOR,
) -> list[SutInstance]:
    """Draw `count` random SUT instances.

    Profiles are drawn uniformly from the (filtered) catalog and resources and
    requirements uniformly from their documented ranges. Draws whose breaking
    point cannot be reached by any action sequence above `floor` are
    redrawn, so every instance yields a finite episode.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    pool = [p for p in (profiles if profiles is not None else catalog()) if filter is None or filter(p)]
    if not pool:
        raise EmptyCatalog("filter admits no catalog profile")

    from .actions import most_reduced
    from .perfsim import response_time

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        profile = pool[int(rng.integers(len(pool)))]
        res = ResourceConfig(
            cpu=float(rng.uniform(*CPU_RANGE)),
            mem=float(rng.uniform(*MEM_RANGE)),
            disk=float(rng.uniform(*DISK_RANGE)),
        )
        rt_q = float(rng.uniform(*RT_REQUIREMENT_RANGE))
        inst = SutInstance(profile, res, rt_q, NOMINAL_RT_FRACTION * rt_q, sut_id=len(out))
        if is_breaking_point(response_time(inst, most_reduced(res, floor)), inst):
            out.append(inst)
    return out
