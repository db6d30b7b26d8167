"""Relative per-block power scores: P_avg = P_s + P_D * alpha * f.

Units are reconciled as P_avg[uW] = P_s[uW] + P_D[pJ] * alpha * f[Hz] * 1e-6.
alpha is the fraction of profiled cycles in which a block is active: it fires
one of its own rules in that cycle, or in the previous cycle some rule wrote a
state the block reads. A cycle counts once no matter how many causes hit it,
so alpha is always within [0, 1]; the raw event count keeps the multiplicity.

Scores rank blocks under one device profile; they are not comparable across
profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .annotation import BlockLabel, BlockRegistry
from .area import RESOURCE_KINDS, resource_counts
from .model import BlockscopeError, Netlist

DEFAULT_STATIC_UW: dict[str, float] = {
    "LUT1": 0.1,
    "LUT2": 0.2,
    "LUT3": 0.3,
    "LUT4": 0.4,
    "LUT5": 0.5,
    "LUT6": 0.6,
    "FF": 0.2,
    "CLK": 0.0,
    "IN": 0.0,
    "OUT": 0.0,
    "MEM_IN": 0.0,
}

DEFAULT_DYNAMIC_PJ: dict[str, float] = {
    "LUT1": 0.5,
    "LUT2": 1.0,
    "LUT3": 1.5,
    "LUT4": 2.0,
    "LUT5": 2.5,
    "LUT6": 3.0,
    "FF": 1.0,
    "CLK": 0.0,
    "IN": 0.0,
    "OUT": 0.0,
    "MEM_IN": 0.0,
}

DEFAULT_FREQUENCY_HZ = 100_000_000.0


class PowerError(BlockscopeError):
    pass


@dataclass(frozen=True)
class PowerModel:
    """Static uW and dynamic pJ per resource kind, plus the clock frequency.

    Coefficients are configuration, not silicon ground truth; they make
    blocks comparable under one device profile.
    """

    static_uw: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_STATIC_UW))
    dynamic_pj: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_DYNAMIC_PJ))
    frequency_hz: float = DEFAULT_FREQUENCY_HZ

    def __post_init__(self) -> None:
        for table, name in ((self.static_uw, "static"), (self.dynamic_pj, "dynamic")):
            for kind, value in table.items():
                if kind not in RESOURCE_KINDS:
                    raise PowerError(f"unknown resource kind {kind!r} in {name} table")
                if value < 0:
                    raise PowerError(f"{name} coefficient for {kind} must be non-negative")
        if not self.frequency_hz > 0:
            raise PowerError("frequency must be positive")

    def static_of(self, kind: str) -> float:
        return float(self.static_uw.get(kind, DEFAULT_STATIC_UW[kind]))

    def dynamic_of(self, kind: str) -> float:
        return float(self.dynamic_pj.get(kind, DEFAULT_DYNAMIC_PJ[kind]))

    @classmethod
    def default(cls) -> "PowerModel":
        return cls()


@dataclass(frozen=True)
class ActivityProfile:
    """Cycle-accurate rule firings plus the static read/write relation.

    firings maps every declared rule to its strictly increasing firing cycles,
    all below ``cycles``. writes holds (rule_id, state_id); reads holds
    (block_label, state_id).
    """

    cycles: int
    rule_block: dict[str, BlockLabel]
    firings: dict[str, tuple[int, ...]]
    writes: frozenset[tuple[str, str]]
    reads: frozenset[tuple[BlockLabel, str]]

    def blocks(self) -> frozenset[BlockLabel]:
        return frozenset(self.rule_block.values()) | frozenset(b for b, _ in self.reads)

    def truncated(self, depth: int) -> "ActivityProfile":
        """Profile with every block label cut to the given depth, for use with
        a registry grouped the same way."""
        return ActivityProfile(
            self.cycles,
            {r: b.truncated(depth) for r, b in self.rule_block.items()},
            dict(self.firings),
            self.writes,
            frozenset((b.truncated(depth), s) for b, s in self.reads),
        )


def active_cycles(block: BlockLabel, profile: ActivityProfile) -> frozenset[int]:
    """Cycles in which the block is active.

    Own rule firings land in the same cycle; a write to a state the block
    reads lands in the next cycle. A firing in the last cycle propagates no
    dependent activity.
    """
    active: set[int] = set()
    for rule, cycles in profile.firings.items():
        if profile.rule_block[rule] == block:
            active.update(cycles)
    read_states = {s for b, s in profile.reads if b == block}
    if read_states:
        for rule, state in profile.writes:
            if state in read_states:
                for t in profile.firings.get(rule, ()):
                    if t + 1 < profile.cycles:
                        active.add(t + 1)
    return frozenset(active)


def activity_events(block: BlockLabel, profile: ActivityProfile) -> int:
    """Raw activation event count, keeping per-cycle multiplicity."""
    events = 0
    for rule, cycles in profile.firings.items():
        if profile.rule_block[rule] == block:
            events += len(cycles)
    read_states = {s for b, s in profile.reads if b == block}
    for rule, state in profile.writes:
        if state in read_states:
            events += sum(1 for t in profile.firings.get(rule, ()) if t + 1 < profile.cycles)
    return events


def switching_factor(block: BlockLabel, profile: ActivityProfile) -> float:
    """Fraction of cycles the block is active; 0.0 for blocks the profile
    never mentions."""
    return len(active_cycles(block, profile)) / profile.cycles


def average_power_uw(static_uw: float, dynamic_pj: float, alpha: float, frequency_hz: float) -> float:
    """P_avg[uW] = P_s[uW] + P_D[pJ] * alpha * f[Hz] * 1e-6."""
    return static_uw + dynamic_pj * alpha * frequency_hz * 1e-6


def static_power(
    block: BlockLabel, registry: BlockRegistry, netlist: Netlist, model: PowerModel
) -> float:
    counts, _ = resource_counts(registry.blocks[block], netlist)
    return sum(counts[kind] * model.static_of(kind) for kind in RESOURCE_KINDS)


def dynamic_coefficient(
    block: BlockLabel, registry: BlockRegistry, netlist: Netlist, model: PowerModel
) -> float:
    counts, _ = resource_counts(registry.blocks[block], netlist)
    return sum(counts[kind] * model.dynamic_of(kind) for kind in RESOURCE_KINDS)


@dataclass(frozen=True)
class BlockPower:
    static_uw: float
    dynamic_pj: float
    alpha: float
    active_cycles: int
    events: int
    average_uw: float
    profiled: bool  # False flags a block the profile never mentions


@dataclass(frozen=True)
class PowerScore:
    per_block: dict[BlockLabel, BlockPower]
    unannotated: BlockPower | None
    ranking: tuple[BlockLabel, ...]
    frequency_hz: float


def power_score(
    netlist: Netlist,
    registry: BlockRegistry,
    model: PowerModel | None = None,
    profile: ActivityProfile | None = None,
) -> PowerScore:
    """Score every block; ranking is by descending P_avg, ties by label.

    Without a profile all alphas are 0 and the ranking degenerates to the
    static-power ranking.
    """
    if model is None:
        model = PowerModel.default()
    known = profile.blocks() if profile is not None else frozenset()

    def score(cells: frozenset[str], label: BlockLabel | None) -> BlockPower:
        counts, _ = resource_counts(cells, netlist)
        p_s = sum(counts[kind] * model.static_of(kind) for kind in RESOURCE_KINDS)
        p_d = sum(counts[kind] * model.dynamic_of(kind) for kind in RESOURCE_KINDS)
        profiled = profile is not None and label is not None and label in known
        if profiled:
            active = active_cycles(label, profile)
            alpha = len(active) / profile.cycles
            events = activity_events(label, profile)
            n_active = len(active)
        else:
            alpha, events, n_active = 0.0, 0, 0
        return BlockPower(
            p_s, p_d, alpha, n_active, events, average_power_uw(p_s, p_d, alpha, model.frequency_hz), profiled
        )

    per_block = {label: score(cells, label) for label, cells in registry.blocks.items()}
    unannotated = score(registry.unannotated, None) if registry.unannotated else None
    ranking = tuple(
        sorted(per_block, key=lambda label: (-per_block[label].average_uw, str(label)))
    )
    return PowerScore(per_block, unannotated, ranking, model.frequency_hz)
