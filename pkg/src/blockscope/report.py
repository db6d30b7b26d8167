"""Render combined area/delay/power results as text, CSV, or canonical JSON.

Every renderer is a pure function of the report, so identical inputs give
byte-identical output. The structured form (schema ``blockscope-report v1``)
sorts keys, keeps delays as integer picoseconds, and fixes decimal places
(power 3, alpha 4), which makes render -> json.loads -> render a fixpoint.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .annotation import BlockLabel, BlockRegistry, build_registry, group_to_depth
from .area import RESOURCE_KINDS, AreaReport, AreaWeights, BlockArea, area_report
from .delay import BlockDelay, DelayReport, PathResult, delay_report
from .model import BlockscopeError, Netlist
from .power import ActivityProfile, BlockPower, PowerModel, PowerScore, power_score

SCHEMA = "blockscope-report v1"
UNANNOTATED_LABEL = "(unannotated)"
POWER_BANNER = "power scores are relative within one device profile; do not compare across profiles"

#: decimal places per JSON key; any float under another key is a bug.
_FLOAT_PRECISION = {
    "weighted_area": 3,
    "static_uw": 3,
    "dynamic_pj": 3,
    "average_uw": 3,
    "frequency_hz": 3,
    "alpha": 4,
}


@dataclass(frozen=True)
class ReportMetadata:
    tool_version: str
    device: str
    netlist_digest: str | None = None
    profile_digest: str | None = None
    group_depth: int | None = None
    block_delay_nets: bool = True


@dataclass(frozen=True)
class CombinedReport:
    metadata: ReportMetadata
    area: AreaReport | None
    delay: DelayReport | None
    power: PowerScore | None


def build_report(
    netlist: Netlist,
    *,
    metrics: tuple[str, ...] = ("area", "delay"),
    registry: BlockRegistry | None = None,
    weights: AreaWeights | None = None,
    model: PowerModel | None = None,
    profile: ActivityProfile | None = None,
    group_depth: int | None = None,
    include_block_nets: bool = True,
    threads: int = 1,
    metadata: ReportMetadata | None = None,
) -> CombinedReport:
    """Run the requested analyses over one registry so all sections share the
    same block label set."""
    for m in metrics:
        if m not in ("area", "delay", "power"):
            raise BlockscopeError(f"unknown metric {m!r}")
    if registry is None:
        registry = build_registry(netlist)
    if group_depth is not None:
        registry = group_to_depth(registry, group_depth)
        if profile is not None:
            profile = profile.truncated(group_depth)
    if metadata is None:
        from . import __version__

        metadata = ReportMetadata(__version__, "virtex7", group_depth=group_depth,
                                  block_delay_nets=include_block_nets)
    area = area_report(netlist, registry, weights) if "area" in metrics else None
    delay = (
        delay_report(netlist, registry, include_block_nets=include_block_nets, threads=threads)
        if "delay" in metrics
        else None
    )
    power = power_score(netlist, registry, model, profile) if "power" in metrics else None
    _check_alignment(area, delay, power)
    return CombinedReport(metadata, area, delay, power)


def _check_alignment(area, delay, power) -> None:
    label_sets = [
        set(section.per_block)
        for section in (area, delay, power)
        if section is not None
    ]
    for other in label_sets[1:]:
        if other != label_sets[0]:
            raise RuntimeError("internal error: report sections disagree on block labels")


def _labels(report: CombinedReport) -> list[BlockLabel]:
    for section in (report.area, report.delay, report.power):
        if section is not None:
            return sorted(section.per_block, key=str)
    return []


def _has_unannotated(report: CombinedReport) -> bool:
    # every section derives from the same registry, so any one of them decides
    if report.delay is not None:
        return report.delay.unannotated is not None
    if report.power is not None:
        return report.power.unannotated is not None
    if report.area is not None:
        return sum(report.area.unannotated.counts.values()) > 0
    return False


# --- canonical JSON ----------------------------------------------------------


def _fmt_scalar(value, key: str) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if key not in _FLOAT_PRECISION:
            raise RuntimeError(f"internal error: no precision rule for float field {key!r}")
        return f"{value:.{_FLOAT_PRECISION[key]}f}"
    if isinstance(value, str):
        return json.dumps(value)
    raise RuntimeError(f"internal error: unsupported JSON value {type(value).__name__}")


def _emit(value, key: str, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(value.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(k)}: ")
            _emit(v, k, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, list):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(value):
            out.append(pad + "  ")
            _emit(v, key, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_fmt_scalar(value, key))


def canonical_json(doc) -> bytes:
    """Sorted keys, two-space indent, fixed decimal places, trailing newline."""
    out: list[str] = []
    _emit(doc, "", 0, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def parse_structured(data: bytes | str):
    """Inverse of render_structured up to Python types (plain dict)."""
    return json.loads(data)


# --- structured document -----------------------------------------------------


def _path_doc(result: PathResult) -> dict:
    return {
        "total_ps": result.total_delay,
        "logic_ps": result.logic_delay,
        "network_ps": result.network_delay,
        "path": list(result.path),
    }


def _area_entry(name: str, entry: BlockArea) -> dict:
    return {
        "block": name,
        "counts": dict(entry.counts),
        "weighted_area": float(entry.weighted_area),
        "unpaired_ff": list(entry.unpaired_ff),
    }


def _delay_entry(name: str, entry: BlockDelay) -> dict:
    return {"block": name, "system": _path_doc(entry.system), "block_delay": _path_doc(entry.block)}


def _power_entry(name: str, entry: BlockPower) -> dict:
    return {
        "block": name,
        "static_uw": float(entry.static_uw),
        "dynamic_pj": float(entry.dynamic_pj),
        "alpha": float(entry.alpha),
        "active_cycles": entry.active_cycles,
        "events": entry.events,
        "average_uw": float(entry.average_uw),
        "profiled": entry.profiled,
    }


def report_document(report: CombinedReport) -> dict:
    meta = report.metadata
    doc: dict = {
        "schema": SCHEMA,
        "metadata": {
            "tool": meta.tool_version,
            "device": meta.device,
            "netlist_digest": meta.netlist_digest,
            "profile_digest": meta.profile_digest,
            "group_depth": meta.group_depth,
            "block_delay_nets": meta.block_delay_nets,
        },
        "area": None,
        "delay": None,
        "power": None,
    }
    labels = _labels(report)
    if report.area is not None:
        a = report.area
        doc["area"] = {
            "blocks": [_area_entry(str(l), a.per_block[l]) for l in labels],
            "unannotated": _area_entry(UNANNOTATED_LABEL, a.unannotated)
            if a.unannotated.counts and sum(a.unannotated.counts.values())
            else None,
            "totals": _area_entry("total", a.totals),
        }
    if report.delay is not None:
        d = report.delay
        doc["delay"] = {
            "blocks": [_delay_entry(str(l), d.per_block[l]) for l in labels],
            "unannotated": _delay_entry(UNANNOTATED_LABEL, d.unannotated)
            if d.unannotated is not None
            else None,
            "global_critical": _path_doc(d.global_critical),
            "critical_blocks": sorted(str(l) for l in d.critical_blocks),
        }
    if report.power is not None:
        p = report.power
        doc["power"] = {
            "note": POWER_BANNER,
            "frequency_hz": float(p.frequency_hz),
            "blocks": [_power_entry(str(l), p.per_block[l]) for l in labels],
            "unannotated": _power_entry(UNANNOTATED_LABEL, p.unannotated)
            if p.unannotated is not None
            else None,
            "ranking": [str(l) for l in p.ranking],
        }
    return doc


def render_structured(report: CombinedReport) -> bytes:
    return canonical_json(report_document(report))


# --- text --------------------------------------------------------------------


def _table(rows: list[list[str]], right_from: int = 1) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [
            r[i].ljust(widths[i]) if i < right_from else r[i].rjust(widths[i])
            for i in range(len(r))
        ]
        out.append("  ".join(cells).rstrip())
    return out


def _fmt_path(result: PathResult) -> str:
    return " -> ".join(result.path) if result.path else "(none)"


def render_text(report: CombinedReport) -> bytes:
    meta = report.metadata
    lines = [
        SCHEMA,
        f"tool: {meta.tool_version}",
        f"device: {meta.device}",
        f"netlist-digest: {meta.netlist_digest or '(none)'}",
        f"profile-digest: {meta.profile_digest or '(none)'}",
        f"group-depth: {meta.group_depth if meta.group_depth is not None else '(none)'}",
        f"block-delay-nets: {'included' if meta.block_delay_nets else 'nodes-only'}",
    ]
    labels = _labels(report)
    show_unannotated = _has_unannotated(report)

    if report.area is not None:
        a = report.area
        lines += ["", "AREA"]
        rows = [["block", *[k.lower() for k in RESOURCE_KINDS], "weighted"]]

        def area_row(name: str, entry: BlockArea) -> list[str]:
            return [name, *[str(entry.counts[k]) for k in RESOURCE_KINDS], f"{entry.weighted_area:.3f}"]

        for label in labels:
            rows.append(area_row(str(label), a.per_block[label]))
        if show_unannotated:
            rows.append(area_row(UNANNOTATED_LABEL, a.unannotated))
        rows.append(area_row("total", a.totals))
        lines += _table(rows)
        if a.totals.unpaired_ff:
            lines.append("unpaired-ff: " + " ".join(a.totals.unpaired_ff))

    if report.delay is not None:
        d = report.delay
        lines += ["", "DELAY (* = on global critical path)"]
        rows = [["block", "", "system_ps", "logic", "net", "block_ps", "logic", "net"]]

        def delay_row(name: str, mark: str, entry: BlockDelay) -> list[str]:
            return [
                name,
                mark,
                str(entry.system.total_delay),
                str(entry.system.logic_delay),
                str(entry.system.network_delay),
                str(entry.block.total_delay),
                str(entry.block.logic_delay),
                str(entry.block.network_delay),
            ]

        for label in labels:
            mark = "*" if label in d.critical_blocks else ""
            rows.append(delay_row(str(label), mark, d.per_block[label]))
        if show_unannotated and d.unannotated is not None:
            rows.append(delay_row(UNANNOTATED_LABEL, "", d.unannotated))
        lines += _table(rows, right_from=2)
        lines.append(f"global-critical: {d.global_critical.total_delay} ps "
                     f"({d.global_critical.logic_delay} logic + {d.global_critical.network_delay} net)")
        lines.append("critical-path: " + _fmt_path(d.global_critical))
        lines.append(
            "critical-blocks: "
            + (" ".join(sorted(str(l) for l in d.critical_blocks)) or "(none)")
        )

    if report.power is not None:
        p = report.power
        lines += ["", "POWER (" + POWER_BANNER + ")"]
        rows = [["block", "p_s_uw", "p_d_pj", "alpha", "active", "events", "p_avg_uw", "profiled"]]

        def power_row(name: str, entry: BlockPower) -> list[str]:
            return [
                name,
                f"{entry.static_uw:.3f}",
                f"{entry.dynamic_pj:.3f}",
                f"{entry.alpha:.4f}",
                str(entry.active_cycles),
                str(entry.events),
                f"{entry.average_uw:.3f}",
                "yes" if entry.profiled else "no",
            ]

        for label in labels:
            rows.append(power_row(str(label), p.per_block[label]))
        if show_unannotated and p.unannotated is not None:
            rows.append(power_row(UNANNOTATED_LABEL, p.unannotated))
        lines += _table(rows)
        lines.append("ranking: " + (" ".join(str(l) for l in p.ranking) or "(none)"))

    return ("\n".join(lines) + "\n").encode("utf-8")


# --- csv ---------------------------------------------------------------------

CSV_HEADER = [
    "section",
    "block",
    "critical",
    *[k.lower() for k in RESOURCE_KINDS],
    "weighted_area",
    "system_total_ps",
    "system_logic_ps",
    "system_network_ps",
    "block_total_ps",
    "block_logic_ps",
    "block_network_ps",
    "p_s_uw",
    "p_d_pj",
    "alpha",
    "active_cycles",
    "events",
    "p_avg_uw",
]

_N_COLS = len(CSV_HEADER)


def _csv_row(section: str, block: str, **fields: str) -> list[str]:
    row = [""] * _N_COLS
    row[0] = section
    row[1] = block
    for key, value in fields.items():
        row[CSV_HEADER.index(key)] = value
    return row


def render_csv(report: CombinedReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    labels = _labels(report)
    names = [str(l) for l in labels]
    if _has_unannotated(report):
        names.append(UNANNOTATED_LABEL)

    if report.area is not None:
        entries = {str(l): report.area.per_block[l] for l in labels}
        if report.area.unannotated is not None:
            entries[UNANNOTATED_LABEL] = report.area.unannotated
        for name in names:
            e = entries[name]
            fields = {k.lower(): str(e.counts[k]) for k in RESOURCE_KINDS}
            fields["weighted_area"] = f"{e.weighted_area:.3f}"
            writer.writerow(_csv_row("area", name, **fields))
    if report.delay is not None:
        d = report.delay
        entries = {str(l): d.per_block[l] for l in labels}
        if d.unannotated is not None:
            entries[UNANNOTATED_LABEL] = d.unannotated
        critical = {str(l) for l in d.critical_blocks}
        for name in names:
            e = entries[name]
            writer.writerow(
                _csv_row(
                    "delay",
                    name,
                    critical="*" if name in critical else "",
                    system_total_ps=str(e.system.total_delay),
                    system_logic_ps=str(e.system.logic_delay),
                    system_network_ps=str(e.system.network_delay),
                    block_total_ps=str(e.block.total_delay),
                    block_logic_ps=str(e.block.logic_delay),
                    block_network_ps=str(e.block.network_delay),
                )
            )
    if report.power is not None:
        p = report.power
        entries = {str(l): p.per_block[l] for l in labels}
        if p.unannotated is not None:
            entries[UNANNOTATED_LABEL] = p.unannotated
        for name in names:
            e = entries[name]
            writer.writerow(
                _csv_row(
                    "power",
                    name,
                    p_s_uw=f"{e.static_uw:.3f}",
                    p_d_pj=f"{e.dynamic_pj:.3f}",
                    alpha=f"{e.alpha:.4f}",
                    active_cycles=str(e.active_cycles),
                    events=str(e.events),
                    p_avg_uw=f"{e.average_uw:.3f}",
                )
            )
    return buf.getvalue().encode("utf-8")
