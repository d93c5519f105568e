"""Widget stencils: precolored cell patterns with typed ports.

Each widget is pure data: a map of relative coordinates to cell specs
(precolored symbol or open), marker labels on open cells, and ports.  The
behavioral contract of every widget is machine-checked by ``verify``; the
stencils themselves ship as fixture files in the board-format alphabet.

Coordinates use the board's (row, index) scheme.  Orientations are the 12
lattice symmetries (6 rotations x optional reflection), computed through cube
coordinates; colors may additionally be permuted (the rules are symmetric
under any relabeling of the three symbols).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from typing import Optional

from .board import Color, Coord, ParseError

OPEN = "."
_PRE = {"B": Color.BARS, "S": Color.SHADE, "F": Color.FILL}

DIR_STEPS: dict[str, tuple[int, int]] = {
    "E": (0, 1),
    "NE": (-1, 0),
    "NW": (-1, -1),
    "W": (0, -1),
    "SW": (1, 0),
    "SE": (1, 1),
}


def _to_cube(c: Coord) -> tuple[int, int, int]:
    r, i = c
    return (i, r - i, -r)


def _from_cube(x: int, y: int, z: int) -> Coord:
    return (-z, x)


def _rot(x: int, y: int, z: int) -> tuple[int, int, int]:
    return (-z, -x, -y)  # one 60-degree step (E -> NE)


def _mirror(x: int, y: int, z: int) -> tuple[int, int, int]:
    return (-y, -x, -z)  # reflection fixing the E axis (NE <-> SE)


def transform_coord(c: Coord, rotation: int, reflect: bool) -> Coord:
    cube = _to_cube(c)
    if reflect:
        cube = _mirror(*cube)
    for _ in range(rotation % 6):
        cube = _rot(*cube)
    return _from_cube(*cube)


def transform_direction(d: str, rotation: int, reflect: bool) -> str:
    c = transform_coord(DIR_STEPS[d], rotation, reflect)
    for name, stepv in DIR_STEPS.items():
        if stepv == c:
            return name
    raise AssertionError(d)


@dataclass(frozen=True)
class Port:
    pos: Coord
    direction: str  # outward-pointing lattice direction
    kind: str  # "in" | "out"
    path_type: tuple  # ("single", Color) | ("two", Color, Color)
    chirality: int = 0  # 1: the continuing segment is laid mirror-flipped

    def describe(self) -> str:
        if self.path_type[0] == "single":
            t = f"single:{self.path_type[1].char}"
        else:
            t = f"two:{self.path_type[1].char},{self.path_type[2].char}"
        return f"{self.pos[0]},{self.pos[1]} {self.direction} {self.kind} {t} chirality={self.chirality}"


@dataclass(frozen=True)
class Widget:
    name: str
    cells: dict[Coord, str]  # "B" | "S" | "F" | "."
    ports: tuple[Port, ...]
    marks: dict[Coord, str]
    max_punish: int = 6  # constant ply bound for refuting deviations

    def precolored(self) -> dict[Coord, Color]:
        return {c: _PRE[v] for c, v in self.cells.items() if v != OPEN}

    def open_cells(self) -> list[Coord]:
        return sorted(c for c, v in self.cells.items() if v == OPEN)

    def port(self, kind: str, index: int = 0) -> Port:
        sel = [p for p in self.ports if p.kind == kind]
        return sel[index]

    def transformed(self, rotation: int = 0, reflect: bool = False) -> "Widget":
        if rotation % 6 == 0 and not reflect:
            return self
        cells = {transform_coord(c, rotation, reflect): v for c, v in self.cells.items()}
        marks = {transform_coord(c, rotation, reflect): v for c, v in self.marks.items()}
        ports = tuple(
            replace(
                p,
                pos=transform_coord(p.pos, rotation, reflect),
                direction=transform_direction(p.direction, rotation, reflect),
            )
            for p in self.ports
        )
        return Widget(self.name, cells, ports, marks, self.max_punish)

    def recolored(self, mapping: dict[Color, Color]) -> "Widget":
        enc = {c.char: mapping[c].char for c in Color}

        def remap_type(t: tuple) -> tuple:
            if t[0] == "single":
                return ("single", mapping[t[1]])
            return ("two", mapping[t[1]], mapping[t[2]])

        cells = {c: (enc[v] if v != OPEN else v) for c, v in self.cells.items()}
        ports = tuple(replace(p, path_type=remap_type(p.path_type)) for p in self.ports)
        return Widget(self.name, cells, ports, self.marks, self.max_punish)

    def translated(self, dr: int, di: int) -> "Widget":
        cells = {(r + dr, i + di): v for (r, i), v in self.cells.items()}
        marks = {(r + dr, i + di): v for (r, i), v in self.marks.items()}
        ports = tuple(replace(p, pos=(p.pos[0] + dr, p.pos[1] + di)) for p in self.ports)
        return Widget(self.name, cells, ports, marks, self.max_punish)


def widget_to_text(w: Widget) -> str:
    lines = [f"widget v1 name={w.name} max_punish={w.max_punish}"]
    for (r, i) in sorted(w.cells):
        lines.append(f"cell {r},{i} {w.cells[(r, i)]}")
    for p in w.ports:
        lines.append(f"port: {p.describe()}")
    for (r, i) in sorted(w.marks):
        lines.append(f"mark: {r},{i} {w.marks[(r, i)]}")
    return "\n".join(lines) + "\n"


def widget_from_text(text: str) -> Widget:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("widget v1 name="):
        raise ParseError("bad widget header", 1)
    head = lines[0].split()
    name = head[2][5:]
    max_punish = 6
    for part in head[3:]:
        if part.startswith("max_punish="):
            max_punish = int(part[11:])
    cells: dict[Coord, str] = {}
    marks: dict[Coord, str] = {}
    ports: list[Port] = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if parts[0] == "cell":
            r, i = (int(x) for x in parts[1].split(","))
            if parts[2] not in ("B", "S", "F", OPEN):
                raise ParseError(f"bad cell spec {parts[2]!r}", lineno)
            cells[(r, i)] = parts[2]
        elif parts[0] == "port:":
            r, i = (int(x) for x in parts[1].split(","))
            direction, kind, ptype = parts[2], parts[3], parts[4]
            if ptype.startswith("single:"):
                path_type = ("single", _PRE[ptype[7:]])
            elif ptype.startswith("two:"):
                a, b = ptype[4:].split(",")
                path_type = ("two", _PRE[a], _PRE[b])
            else:
                raise ParseError(f"bad port type {ptype!r}", lineno)
            chirality = 0
            for extra in parts[5:]:
                if extra.startswith("chirality="):
                    chirality = int(extra[10:])
            ports.append(Port((r, i), direction, kind, path_type, chirality))
        elif parts[0] == "mark:":
            r, i = (int(x) for x in parts[1].split(","))
            marks[(r, i)] = parts[2]
        else:
            raise ParseError(f"bad widget line {ln!r}", lineno)
    return Widget(name, cells, tuple(ports), marks, max_punish)


# ---------------------------------------------------------------------------
# Parametric path builders (the straight-path patterns the router tiles)


def build_single_path(length: int, symbol: Color = Color.FILL) -> Widget:
    """Horizontal single-symbol path: open run flanked to force `symbol`.

    With Fill: Shade along the top flank blocks switching to Bars (any switch
    completes Shade/previous/next), Bars along the bottom blocks Shade.
    Other symbols come from recoloring.
    """
    cells: dict[Coord, str] = {}
    for i in range(-1, length):
        cells[(-1, i)] = "S"
    for i in range(0, length + 1):
        cells[(1, i)] = "B"
    for i in range(length):
        cells[(0, i)] = OPEN
    ports = (
        Port((0, 0), "W", "in", ("single", Color.FILL)),
        Port((0, length - 1), "E", "out", ("single", Color.FILL)),
    )
    w = Widget(f"single_path", cells, ports, {})
    if symbol is not Color.FILL:
        w = w.recolored(_fill_to(symbol))
    return w


def build_two_path(length: int) -> Widget:
    """Horizontal two-symbol path: whichever of Bars/Fill enters persists."""
    cells: dict[Coord, str] = {}
    for i in range(-1, length):
        cells[(-1, i)] = "S"
    for i in range(0, length + 1):
        cells[(1, i)] = "B" if i % 2 == 0 else "F"
    for i in range(length):
        cells[(0, i)] = OPEN
    ports = (
        Port((0, 0), "W", "in", ("two", Color.BARS, Color.FILL)),
        Port((0, length - 1), "E", "out", ("two", Color.BARS, Color.FILL)),
    )
    return Widget("two_path", cells, ports, {})


def _fill_to(symbol: Color) -> dict[Color, Color]:
    """Color permutation sending Fill to `symbol`, keeping a consistent triple."""
    if symbol is Color.FILL:
        return {c: c for c in Color}
    if symbol is Color.BARS:
        return {Color.FILL: Color.BARS, Color.BARS: Color.FILL, Color.SHADE: Color.SHADE}
    return {Color.FILL: Color.SHADE, Color.SHADE: Color.FILL, Color.BARS: Color.BARS}


# ---------------------------------------------------------------------------
# Catalog loading


def _fixture_names() -> list[str]:
    return [
        "single_path",
        "two_path",
        "switch_two_to_one",
        "turn_down",
        "turn_up",
        "variable",
        "splitter",
        "joiner",
        "crossover",
        "parity_switch",
    ]


def load_widget(name: str) -> Widget:
    data = resources.files("sperner").joinpath(f"widgets/{name}.wgt").read_text()
    return widget_from_text(data)


def widget_catalog() -> list[Widget]:
    """All ten widgets, loaded from their fixture files."""
    return [load_widget(name) for name in _fixture_names()]
