"""Aggregation: weighted task rates, capability profiles, random baselines."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .tasks import TASK_KINDS, CAPABILITY_TAGS, level_param

LEVEL_WEIGHTS = (0.2, 0.3, 0.5)

CAPABILITY_ORDER = ("E", "M", "L", "P", "PR")

CAPABILITY_NAMES = {
    "E": "Execution",
    "M": "Memory",
    "L": "Learning",
    "P": "Planning",
    "PR": "Perception Reasoning",
}


def default_capability_map() -> dict[str, tuple[str, ...]]:
    """Capability -> task set, derived from the per-task tags."""
    out: dict[str, list[str]] = {c: [] for c in CAPABILITY_ORDER}
    for kind in TASK_KINDS:
        for tag in CAPABILITY_TAGS[kind]:
            out[tag].append(kind)
    return {c: tuple(v) for c, v in out.items()}


@dataclass
class SuccessTable:
    """Per (kind, level) success rates with provenance."""

    rates: dict[tuple[str, int], float] = field(default_factory=dict)
    provenance: str = "measured"
    counts: dict[tuple[str, int], tuple[int, int]] = field(default_factory=dict)

    def get(self, kind: str, level: int) -> float:
        return self.rates[(kind, level)]

    def set(self, kind: str, level: int, rate: float) -> None:
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"rate out of range: {rate}")
        self.rates[(kind, level)] = rate

    def missing_cells(self) -> list[tuple[str, int]]:
        return [
            (kind, level)
            for kind in TASK_KINDS
            for level in (1, 2, 3)
            if (kind, level) not in self.rates
        ]

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "rates": {
                kind: {
                    str(level): self.rates[(kind, level)]
                    for level in (1, 2, 3)
                    if (kind, level) in self.rates
                }
                for kind in sorted({k for k, _ in self.rates})
            },
            "counts": {
                f"{kind}-L{level}": list(v)
                for (kind, level), v in sorted(self.counts.items())
            },
        }

    @classmethod
    def from_json(cls, d: dict) -> "SuccessTable":
        rates = {
            (kind, int(level)): rate
            for kind, by_level in d["rates"].items()
            for level, rate in by_level.items()
        }
        counts = {}
        for cell, pair in d.get("counts", {}).items():
            kind, level = cell.rsplit("-L", 1)
            counts[(kind, int(level))] = tuple(pair)
        return cls(rates=rates, provenance=d.get("provenance", "imported"),
                   counts=counts)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["kind", "L1", "L2", "L3"])
        for kind in sorted({k for k, _ in self.rates}):
            writer.writerow(
                [kind] + [self.rates.get((kind, lv), "") for lv in (1, 2, 3)]
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SuccessTable":
        rates = {}
        for row in csv.DictReader(io.StringIO(text)):
            for level in (1, 2, 3):
                value = row.get(f"L{level}", "")
                if value != "":
                    rates[(row["kind"], level)] = float(value)
        return cls(rates=rates, provenance="imported")

    @classmethod
    def from_rows(cls, rows: dict[str, tuple[float, float, float]],
                  provenance: str = "imported") -> "SuccessTable":
        rates = {
            (kind, level): rows[kind][level - 1]
            for kind in rows
            for level in (1, 2, 3)
        }
        return cls(rates=rates, provenance=provenance)


def weighted_rate(p1: float, p2: float, p3: float) -> float:
    """Difficulty-weighted task success rate."""
    for p in (p1, p2, p3):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"rate out of range: {p}")
    w1, w2, w3 = LEVEL_WEIGHTS
    return w1 * p1 + w2 * p2 + w3 * p3


class MissingCellsError(ValueError):
    def __init__(self, cells):
        self.cells = list(cells)
        super().__init__(f"success table missing cells: {self.cells}")


def capability_profile(
    table: SuccessTable,
    capability_map: Optional[dict[str, tuple[str, ...]]] = None,
) -> dict[str, int]:
    """Five integer scores 0-100, one per capability axis."""
    cap_map = capability_map or default_capability_map()
    needed = sorted({
        (kind, level)
        for kinds in cap_map.values()
        for kind in kinds
        for level in (1, 2, 3)
    })
    missing = [cell for cell in needed if cell not in table.rates]
    if missing:
        raise MissingCellsError(missing)
    profile = {}
    for cap in cap_map:
        ws = [
            weighted_rate(*(table.get(kind, lv) for lv in (1, 2, 3)))
            for kind in cap_map[cap]
        ]
        profile[cap] = int(math.floor(100 * sum(ws) / len(ws) + 0.5))
    return profile


# ---------------------------------------------------------------------------
# random baselines


class UnsupportedBaseline(Exception):
    """No closed form for this kind; use the Monte-Carlo estimator."""


ANALYTIC_KINDS = ("SE", "SO", "FI", "PU", "PL", "MDE", "MFI")


def analytic_random_baseline(kind: str, level: int) -> Fraction:
    """Exact uniform-random success probability, where a closed form exists.

    Forms follow from the generated per-step option counts:
    - SE: k targets among 2k+2 items, chosen without replacement.
    - SO: matching k items to k positions, one pair per step.
    - FI/PU/MFI: 4 pieces, k of them correct for their one position each.
    - PL: one item, n candidate positions.
    - MDE: one choice among 2k+2 items.
    """
    if kind not in ANALYTIC_KINDS:
        raise UnsupportedBaseline(kind)
    k = level_param(kind, level)
    if kind == "SE":
        n = 2 * k + 2
        p = Fraction(1)
        for i in range(k):
            p *= Fraction(k - i, n - i)
        return p
    if kind == "SO":
        return Fraction(1, math.factorial(k))
    if kind in ("FI", "PU", "MFI"):
        p = Fraction(1)
        for i in range(k):
            p *= Fraction(1, 4 - i)
        return p
    if kind == "PL":
        return Fraction(1, k)
    # MDE
    return Fraction(1, 2 * k + 2)


@dataclass(frozen=True)
class BaselineEstimate:
    kind: str
    level: int
    rounds: int
    mean: float
    half_width: float  # 95% normal-approximation confidence half-width

    @property
    def std_error(self) -> float:
        return self.half_width / 1.96 if self.half_width else 0.0


def estimate_random_baseline(
    kind: str, level: int, rounds: int = 500, seed: int = 0
) -> BaselineEstimate:
    """Monte-Carlo random-policy success rate with a 95% half-width."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    from .harness import EpisodeConfig, RandomClient, run_episode
    from .procgen import episode_seed, sample_instance
    from .world import derive_seed

    client = RandomClient(derive_seed("random-client", kind, level, seed))
    config = EpisodeConfig()
    successes = 0
    for rnd in range(rounds):
        inst = sample_instance(kind, level, episode_seed(seed, kind, level, rnd))
        successes += run_episode(inst, client, config).success
    mean = successes / rounds
    half = 1.96 * math.sqrt(mean * (1 - mean) / rounds)
    return BaselineEstimate(
        kind=kind, level=level, rounds=rounds, mean=mean, half_width=half
    )


def baseline_table(rounds: int = 500, seed: int = 0) -> dict:
    """Analytic (where available) and Monte-Carlo baselines for all cells."""
    out = {}
    for kind in TASK_KINDS:
        for level in (1, 2, 3):
            est = estimate_random_baseline(kind, level, rounds, seed)
            try:
                analytic = float(analytic_random_baseline(kind, level))
            except UnsupportedBaseline:
                analytic = None
            out[f"{kind}-L{level}"] = {
                "analytic": analytic,
                "monte_carlo": est.mean,
                "rounds": rounds,
                "half_width": est.half_width,
            }
    return out
