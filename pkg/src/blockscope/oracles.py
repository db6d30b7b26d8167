"""Brute-force reference implementations used only by the test suite.

Each oracle recomputes a result by direct enumeration or literal replay so the
production code paths can be checked against something with no shared logic.
All enumeration is exponential and guarded by a cell-count limit.
"""

from __future__ import annotations

from .annotation import BlockLabel
from .delay import WeightingMode, ZERO_PATH, PathResult
from .model import BlockscopeError, CellKind, Netlist
from .power import ActivityProfile

MAX_ORACLE_CELLS = 14


def enumerate_paths(netlist: Netlist, max_cells: int = MAX_ORACLE_CELLS) -> list[tuple[str, ...]]:
    """All complete source-to-sink paths as cell-id tuples, DFS order."""
    if len(netlist.cells) > max_cells:
        raise BlockscopeError(
            f"oracle limited to {max_cells} cells, got {len(netlist.cells)}"
        )
    succ: dict[str, list[str]] = {}
    for net in netlist.nets:
        dsts = succ.setdefault(net.src, [])
        if net.dst not in dsts:
            dsts.append(net.dst)
    for dsts in succ.values():
        dsts.sort()
    paths: list[tuple[str, ...]] = []

    def dfs(node: str, acc: list[str]) -> None:
        if netlist.cell(node).kind.is_sink:
            paths.append(tuple(acc))
            return
        for nxt in succ.get(node, ()):
            acc.append(nxt)
            dfs(nxt, acc)
            acc.pop()

    for cell in netlist.cells:
        if cell.kind.is_source:
            dfs(cell.id, [cell.id])
    return paths


def _edge_delay(netlist: Netlist, src: str, dst: str) -> int:
    return max(n.net_delay for n in netlist.out_nets(src) if n.dst == dst)


def oracle_longest_path(
    netlist: Netlist,
    block_cells: frozenset[str] | None,
    mode: WeightingMode,
    include_block_nets: bool = True,
    max_cells: int = MAX_ORACLE_CELLS,
) -> PathResult:
    """Enumerate every complete path, weigh it, keep the best.

    Mirrors the production tie rule: maximum total delay first, then the
    lexicographically smallest cell-id sequence.
    """
    candidates = enumerate_paths(netlist, max_cells)
    if block_cells is not None:
        candidates = [p for p in candidates if any(c in block_cells for c in p)]

    def in_scope_node(cid: str) -> bool:
        if mode is WeightingMode.SYSTEM or block_cells is None:
            return True
        return cid in block_cells

    def in_scope_edge(u: str, v: str) -> bool:
        if mode is WeightingMode.SYSTEM or block_cells is None:
            return True
        return include_block_nets and u in block_cells and v in block_cells

    best: tuple[int, tuple[str, ...]] | None = None
    for path in candidates:
        weight = sum(
            netlist.cell(c).logic_delay for c in path if in_scope_node(c)
        ) + sum(
            _edge_delay(netlist, u, v)
            for u, v in zip(path, path[1:])
            if in_scope_edge(u, v)
        )
        key = (-weight, path)
        if best is None or key < (-best[0], best[1]):
            best = (weight, path)
    if best is None:
        return ZERO_PATH
    weight, path = best
    logic = sum(netlist.cell(c).logic_delay for c in path if in_scope_node(c))
    return PathResult(weight, logic, weight - logic, path)


def oracle_expand(
    netlist: Netlist,
    seeds: frozenset[str],
    max_cells: int = MAX_ORACLE_CELLS,
) -> tuple[frozenset[str], frozenset[tuple[str, str]]]:
    """Union of all complete paths that pass through at least one seed,
    returned as node and (src, dst) edge sets."""
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for path in enumerate_paths(netlist, max_cells):
        if any(c in seeds for c in path):
            nodes.update(path)
            edges.update(zip(path, path[1:]))
    return frozenset(nodes), frozenset(edges)


def oracle_replay(profile: ActivityProfile) -> dict[BlockLabel, frozenset[int]]:
    """Literal cycle-by-cycle replay of the activity rules.

    A block is active on a cycle when one of its rules fires, and on the
    cycle after any rule writes a state the block reads (when that next
    cycle is still observed).
    """
    active: dict[BlockLabel, set[int]] = {b: set() for b in profile.blocks()}
    for t in range(profile.cycles):
        for rid, fires in profile.firings.items():
            if t not in fires:
                continue
            active[profile.rule_block[rid]].add(t)
            for writer, state in profile.writes:
                if writer != rid:
                    continue
                for reader, read_state in profile.reads:
                    if read_state == state and t + 1 < profile.cycles:
                        active[reader].add(t + 1)
    return {b: frozenset(ts) for b, ts in active.items()}


def oracle_resource_counts(netlist: Netlist) -> dict[str, int]:
    """Whole-netlist resource totals counted straight off the cell list:
    one FF per pair plus one per unpaired FF_D/FF_Q half.

    Assumes every pair lives inside one partition, which holds for all
    fixtures; split pairs are covered by dedicated unit tests instead.
    """
    paired_qs = {q for _, q in netlist.ff_pairs}
    counts: dict[str, int] = {}
    for cell in netlist.cells:
        if cell.kind is CellKind.FF_Q and cell.id in paired_qs:
            continue
        name = "FF" if cell.kind in (CellKind.FF_D, CellKind.FF_Q) else cell.kind.name
        counts[name] = counts.get(name, 0) + 1
    return counts
