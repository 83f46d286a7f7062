"""Plain-text persistence of learned Q-tables."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Optional

from .actions import ACTION_BY_NAME, ACTIONS
from .agent import LearningParams, QTable
from .errors import MalformedPolicyFile
from .fuzzy import STATE_INDEX, STATE_LABELS
from .sut import catalog, catalog_hash

MAGIC = "# safrel-policy 1"
COLUMNS = ["state", "action", "q"]


def save_policy(q: QTable, destination, params: Optional[LearningParams] = None, profiles=None) -> None:
    """Write one ``state,action,q`` record per cell; q is rendered with repr() so it reads back bit-exact."""
    params = params or LearningParams()
    profiles = catalog() if profiles is None else profiles
    with open(destination, "w", newline="") as fh:
        fh.write(f"{MAGIC}\n")
        fh.write(f"# alpha={params.alpha!r}\n")
        fh.write(f"# gamma={params.gamma!r}\n")
        fh.write(f"# catalog_sha256={catalog_hash(profiles)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for label in STATE_LABELS:
            for a in ACTIONS:
                w.writerow([label, a.name, repr(q[label, a])])


def read_header(source) -> dict[str, str]:
    header = {}
    with open(source) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                header[key] = value
    return header


def load_policy(source) -> QTable:
    q = QTable()
    seen = set()
    with open(source, newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != MAGIC:
        raise MalformedPolicyFile(f"{source}: missing policy header")
    body = [ln for ln in lines if not ln.startswith("#")]
    if not body or body[0].split(",") != COLUMNS:
        raise MalformedPolicyFile(f"{source}: missing column header")
    for lineno, rec in enumerate(csv.reader(body[1:]), start=2):
        if len(rec) != 3:
            raise MalformedPolicyFile(f"{source}: record {lineno} has {len(rec)} fields")
        label, name, text = rec
        if label not in STATE_INDEX or name not in ACTION_BY_NAME:
            raise MalformedPolicyFile(f"{source}: unknown state/action {label!r}/{name!r}")
        try:
            value = float(text)
        except ValueError:
            raise MalformedPolicyFile(f"{source}: bad q-value {text!r}") from None
        if not math.isfinite(value):
            raise MalformedPolicyFile(f"{source}: non-finite q-value {text!r}")
        key = (label, name)
        if key in seen:
            raise MalformedPolicyFile(f"{source}: duplicate cell {key}")
        seen.add(key)
        q[label, ACTION_BY_NAME[name]] = value
    if len(seen) != len(STATE_LABELS) * len(ACTIONS):
        raise MalformedPolicyFile(f"{source}: expected {len(STATE_LABELS) * len(ACTIONS)} cells, found {len(seen)}")
    return q
