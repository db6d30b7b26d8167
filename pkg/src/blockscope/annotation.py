"""Recover block structure from cell-name annotations that survive synthesis.

A cell id of the form ``<label>__<local_name>`` assigns the cell to the block
``label``; the first ``__`` wins, so the local name may itself contain more
double underscores. Labels are hierarchical: dot-separated segments over
[A-Za-z0-9_], where no segment may contain ``__`` (that would collide with
the delimiter). Cells without ``__`` belong to the unannotated pseudo-block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import BlockscopeError, Netlist

_SEGMENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class AnnotationError(BlockscopeError):
    def __init__(self, message: str, cell_id: str | None = None):
        self.cell_id = cell_id
        super().__init__(message)


@dataclass(frozen=True, order=True)
class BlockLabel:
    """Hierarchical block name; compares and sorts by its segment tuple."""

    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise AnnotationError("block label needs at least one segment")
        for seg in self.segments:
            if not _SEGMENT_RE.match(seg) or "__" in seg:
                raise AnnotationError(f"malformed block label segment {seg!r}")

    @classmethod
    def parse(cls, text: str) -> "BlockLabel":
        if not text:
            raise AnnotationError("empty block label")
        return cls(tuple(text.split(".")))

    @property
    def depth(self) -> int:
        return len(self.segments)

    def truncated(self, depth: int) -> "BlockLabel":
        if depth < 1:
            raise AnnotationError("depth must be >= 1")
        return BlockLabel(self.segments[:depth])

    def __str__(self) -> str:
        return ".".join(self.segments)


def extract_block_label(cell_id: str) -> BlockLabel | None:
    """Label before the first ``__`` of the id, or None for unannotated cells.

    Raises AnnotationError when a ``__`` is present but the prefix is not a
    well-formed label (empty or illegal segment).
    """
    pos = cell_id.find("__")
    if pos < 0:
        return None
    prefix = cell_id[:pos]
    try:
        return BlockLabel.parse(prefix)
    except AnnotationError as exc:
        raise AnnotationError(
            f"cell id {cell_id!r} has a malformed block label prefix: {exc}", cell_id
        ) from None


@dataclass(frozen=True)
class BlockRegistry:
    """Partition of all cell ids into labeled blocks plus the unannotated rest.

    blocks preserves first-seen order over ids sorted ascending; rendering
    shows the pseudo-block as ``(unannotated)`` and never merges it.
    """

    blocks: dict[BlockLabel, frozenset[str]]
    unannotated: frozenset[str]

    @property
    def all_cells(self) -> frozenset[str]:
        out = set(self.unannotated)
        for cells in self.blocks.values():
            out |= cells
        return frozenset(out)

    @property
    def unannotated_fraction(self) -> float:
        total = len(self.all_cells)
        return len(self.unannotated) / total if total else 0.0

    def label_of(self, cell_id: str) -> BlockLabel | None:
        for label, cells in self.blocks.items():
            if cell_id in cells:
                return label
        return None


def build_registry(netlist: Netlist) -> BlockRegistry:
    """Group cells by extracted label, scanning ids in ascending order."""
    blocks: dict[BlockLabel, set[str]] = {}
    unannotated: set[str] = set()
    for cid in netlist.cell_ids():
        label = extract_block_label(cid)
        if label is None:
            unannotated.add(cid)
        else:
            blocks.setdefault(label, set()).add(cid)
    return BlockRegistry(
        {label: frozenset(cells) for label, cells in blocks.items()},
        frozenset(unannotated),
    )


def group_to_depth(registry: BlockRegistry, depth: int) -> BlockRegistry:
    """Collapse labels to their first ``depth`` segments, merging cell sets.

    Idempotent: grouping an already depth-d registry to depth d is a no-op.
    The unannotated pseudo-block is never merged with labeled blocks.
    """
    if depth < 1:
        raise AnnotationError("group depth must be >= 1")
    grouped: dict[BlockLabel, set[str]] = {}
    for label, cells in registry.blocks.items():
        short = label.truncated(depth)
        grouped.setdefault(short, set()).update(cells)
    return BlockRegistry(
        {label: frozenset(cells) for label, cells in grouped.items()},
        registry.unannotated,
    )
