"""Per-block resource counts and weighted area.

Counts are exact integers over resource kinds: LUT1..LUT6, FF, CLK, IN, OUT,
MEM_IN. An FF_D/FF_Q pair listed in ff_pairs counts as one FF resource when
both ports fall in the same partition cell set; an unpaired port (or a pair
split across partitions, which generators never emit) counts as one FF each
and is flagged. Weighted area is the count-weighted sum under a weight table;
the same table drives static power sizing downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .annotation import BlockLabel, BlockRegistry
from .model import BlockscopeError, CellKind, Netlist

RESOURCE_KINDS: tuple[str, ...] = (
    "LUT1",
    "LUT2",
    "LUT3",
    "LUT4",
    "LUT5",
    "LUT6",
    "FF",
    "CLK",
    "IN",
    "OUT",
    "MEM_IN",
)

#: CellKind -> resource kind name; both FF ports map onto the FF resource.
RESOURCE_OF_KIND: dict[CellKind, str] = {
    kind: ("FF" if kind in (CellKind.FF_D, CellKind.FF_Q) else kind.value) for kind in CellKind
}

DEFAULT_WEIGHTS: dict[str, float] = {
    "LUT1": 1.0,
    "LUT2": 1.0,
    "LUT3": 1.0,
    "LUT4": 1.0,
    "LUT5": 1.0,
    "LUT6": 1.0,
    "FF": 1.0,
    "CLK": 0.0,
    "IN": 0.0,
    "OUT": 0.0,
    "MEM_IN": 0.0,
}


class AreaError(BlockscopeError):
    pass


@dataclass(frozen=True)
class AreaWeights:
    """Non-negative weight per resource kind; unknown kinds are rejected."""

    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    def __post_init__(self) -> None:
        for kind, w in self.weights.items():
            if kind not in RESOURCE_KINDS:
                raise AreaError(f"unknown resource kind {kind!r} in weight table")
            if w < 0:
                raise AreaError(f"weight for {kind} must be non-negative")

    def weight(self, kind: str) -> float:
        return float(self.weights.get(kind, DEFAULT_WEIGHTS[kind]))

    @classmethod
    def default(cls) -> "AreaWeights":
        return cls()


@dataclass(frozen=True)
class BlockArea:
    counts: dict[str, int]
    weighted_area: float
    unpaired_ff: tuple[str, ...] = ()


@dataclass(frozen=True)
class AreaReport:
    per_block: dict[BlockLabel, BlockArea]
    unannotated: BlockArea
    totals: BlockArea


def _pair_map(netlist: Netlist) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for d, q in netlist.ff_pairs:
        pairs[d] = q
        pairs[q] = d
    return pairs


def resource_counts(
    cells: Iterable[str], netlist: Netlist, pair_map: dict[str, str] | None = None
) -> tuple[dict[str, int], tuple[str, ...]]:
    """Count resource kinds over a cell set; returns (counts, unpaired FF ids).

    The FF_Q of a co-located pair is skipped so the pair counts once at its D
    port.
    """
    if pair_map is None:
        pair_map = _pair_map(netlist)
    counts = {kind: 0 for kind in RESOURCE_KINDS}
    unpaired: list[str] = []
    cell_set = set(cells)
    for cid in sorted(cell_set):
        kind = netlist.cell(cid).kind
        if kind is CellKind.FF_D:
            partner = pair_map.get(cid)
            counts["FF"] += 1
            if partner is None or partner not in cell_set:
                unpaired.append(cid)
        elif kind is CellKind.FF_Q:
            partner = pair_map.get(cid)
            if partner is not None and partner in cell_set:
                continue  # counted at the D port
            counts["FF"] += 1
            unpaired.append(cid)
        else:
            counts[RESOURCE_OF_KIND[kind]] += 1
    return counts, tuple(unpaired)


def weighted_area(counts: Mapping[str, int], weights: AreaWeights) -> float:
    return sum(counts[kind] * weights.weight(kind) for kind in RESOURCE_KINDS)


def area_report(
    netlist: Netlist, registry: BlockRegistry, weights: AreaWeights | None = None
) -> AreaReport:
    """Per-block counts and weighted area plus a totals row.

    Totals are the kind-by-kind sum of all blocks and the pseudo-block, so
    conservation holds by construction; a mismatch between registry and
    netlist cell ids is an error.
    """
    if weights is None:
        weights = AreaWeights.default()
    for cid in registry.all_cells:
        if not netlist.has_cell(cid):
            raise AreaError(f"registry references unknown cell {cid}")
    pair_map = _pair_map(netlist)

    def block_area(cells: frozenset[str]) -> BlockArea:
        counts, unpaired = resource_counts(cells, netlist, pair_map)
        return BlockArea(counts, weighted_area(counts, weights), unpaired)

    per_block = {label: block_area(cells) for label, cells in registry.blocks.items()}
    unannotated = block_area(registry.unannotated)
    total_counts = {kind: 0 for kind in RESOURCE_KINDS}
    total_unpaired: list[str] = []
    for ba in list(per_block.values()) + [unannotated]:
        for kind in RESOURCE_KINDS:
            total_counts[kind] += ba.counts[kind]
        total_unpaired.extend(ba.unpaired_ff)
    totals = BlockArea(
        total_counts, weighted_area(total_counts, weights), tuple(sorted(total_unpaired))
    )
    return AreaReport(per_block, unannotated, totals)
