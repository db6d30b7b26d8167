"""Built-in device profiles and the custom device file loader.

A device profile is a named coefficient set: per-kind cell logic delays (used
when generating fixtures or when --override-delays rewrites a netlist), an
area weight table, and a power model. Built-ins differ only in LUT speed;
LUT_k scales as LUT6 * k / 6, rounded half-up in integer picoseconds. The
power model is deliberately shared across built-ins so scores stay comparable
within one device and delay scaling stays the only difference between them.

Custom profile file (header ``blockscope-device v1``), based on virtex7 for
anything unspecified::

    delay <CELL_KIND> <ps>
    weight <RESOURCE_KIND> <w>
    static <RESOURCE_KIND> <uW>
    dynamic <RESOURCE_KIND> <pJ>
    frequency <Hz>
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .area import RESOURCE_KINDS, AreaWeights
from .formats import ParseError, _nat_field, _num_field, _scan, _take_header, _want
from .model import Cell, CellKind, Netlist
from .power import PowerModel

DEVICE_HEADER = "blockscope-device v1"

_LUT6_PS = {"spartan6": 200, "virtex5": 80, "virtex7": 40}


def _scaled_delays(lut6_ps: int) -> dict[CellKind, int]:
    delays = {kind: 0 for kind in CellKind}
    for k in range(1, 7):
        delays[CellKind[f"LUT{k}"]] = (lut6_ps * k + 3) // 6  # round half-up
    return delays


@dataclass(frozen=True)
class DeviceProfile:
    name: str
    logic_delays: dict[CellKind, int]
    weights: AreaWeights
    power: PowerModel

    def apply_delays(self, netlist: Netlist) -> Netlist:
        """Netlist with every cell's logic delay replaced by this profile's."""
        cells = tuple(
            Cell(c.id, c.kind, self.logic_delays[c.kind]) for c in netlist.cells
        )
        return Netlist(cells, netlist.nets, netlist.ff_pairs)


BUILTIN_DEVICES = tuple(sorted(_LUT6_PS))


def builtin_device(name: str) -> DeviceProfile:
    if name not in _LUT6_PS:
        raise ParseError(f"unknown device profile {name!r}", 1)
    return DeviceProfile(name, _scaled_delays(_LUT6_PS[name]), AreaWeights.default(), PowerModel.default())


def load_device_file(path: Path) -> DeviceProfile:
    base = builtin_device("virtex7")
    data = path.read_bytes()
    lines = _take_header(_scan(data), DEVICE_HEADER)
    delays = dict(base.logic_delays)
    weights = dict(base.weights.weights)
    static = dict(base.power.static_uw)
    dynamic = dict(base.power.dynamic_pj)
    frequency = base.power.frequency_hz
    seen: set[tuple[str, str]] = set()
    for lineno, tokens in lines:
        keyword = tokens[0][0]
        if keyword == "delay":
            _want(tokens, 3, lineno, "delay <CELL_KIND> <ps>")
            kind_text, kind_col = tokens[1]
            try:
                kind = CellKind[kind_text]
            except KeyError:
                raise ParseError(f"unknown cell kind {kind_text}", lineno, kind_col) from None
            ps = _nat_field(tokens[2], lineno, "logic delay")
            if kind.is_source and ps != 0:
                raise ParseError(f"{kind.value} is a path source and must keep delay 0", lineno, kind_col)
            if ("delay", kind_text) in seen:
                raise ParseError(f"duplicate delay entry for {kind_text}", lineno, kind_col)
            seen.add(("delay", kind_text))
            delays[kind] = ps
        elif keyword in ("weight", "static", "dynamic"):
            _want(tokens, 3, lineno, f"{keyword} <RESOURCE_KIND> <value>")
            kind_text, kind_col = tokens[1]
            if kind_text not in RESOURCE_KINDS:
                raise ParseError(f"unknown resource kind {kind_text}", lineno, kind_col)
            value = _num_field(tokens[2], lineno, f"{keyword} value")
            if (keyword, kind_text) in seen:
                raise ParseError(f"duplicate {keyword} entry for {kind_text}", lineno, kind_col)
            seen.add((keyword, kind_text))
            {"weight": weights, "static": static, "dynamic": dynamic}[keyword][kind_text] = value
        elif keyword == "frequency":
            _want(tokens, 2, lineno, "frequency <Hz>")
            if ("frequency", "") in seen:
                raise ParseError("duplicate frequency directive", lineno, tokens[0][1])
            seen.add(("frequency", ""))
            frequency = _num_field(tokens[1], lineno, "frequency")
            if not frequency > 0:
                raise ParseError("frequency must be positive", lineno, tokens[1][1])
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno, tokens[0][1])
    return DeviceProfile(
        path.stem, delays, AreaWeights(weights), PowerModel(static, dynamic, frequency)
    )


def resolve_device(name_or_path: str) -> DeviceProfile:
    """Built-in name, or a path to a custom device profile file."""
    if name_or_path in _LUT6_PS:
        return builtin_device(name_or_path)
    path = Path(name_or_path)
    if not path.exists():
        raise ParseError(
            f"unknown device profile {name_or_path!r}; built-ins: {', '.join(BUILTIN_DEVICES)}", 1
        )
    return load_device_file(path)
