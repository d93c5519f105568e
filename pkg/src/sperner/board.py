"""Triangular game board: geometry, coloring, bad triangles, counting.

The playable area is a triangular array of cells addressed as ``(row, index)``
with the apex at ``(0, 0)``; row ``r`` holds ``r + 1`` cells.  Around it sits
an immutable precolored boundary ring, one arc per side, colored with an
alternating pair of symbols so that playing the side's forbidden symbol next
to it immediately completes a trichromatic ("bad") triangle.

Boards are immutable values: every mutation returns a new board.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Optional

Coord = tuple[int, int]


class Color(IntEnum):
    BARS = 1
    SHADE = 2
    FILL = 3

    @property
    def char(self) -> str:
        return _COLOR_CHARS[self]


_COLOR_CHARS = {Color.BARS: "B", Color.SHADE: "S", Color.FILL: "F"}
_CHAR_COLORS = {"B": Color.BARS, "S": Color.SHADE, "F": Color.FILL}

COLORS = (Color.BARS, Color.SHADE, Color.FILL)

# The six lattice directions as (drow, dindex) steps.
E = (0, 1)
W = (0, -1)
NE = (-1, 0)
NW = (-1, -1)
SW = (1, 0)
SE = (1, 1)
DIRECTIONS = (E, NE, NW, W, SW, SE)


class SpernerError(Exception):
    """Base class for all domain errors."""


class InvalidArgument(SpernerError, ValueError):
    pass


class IllegalMove(SpernerError):
    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class InvalidState(SpernerError):
    pass


class PreconditionViolation(SpernerError):
    pass


class ResourceLimit(SpernerError):
    def __init__(self, message: str, nodes_visited: int = 0):
        super().__init__(message)
        self.nodes_visited = nodes_visited


class ParseError(SpernerError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.column = column


def step(c: Coord, d: tuple[int, int]) -> Coord:
    return (c[0] + d[0], c[1] + d[1])


def adjacent_coords(c: Coord) -> list[Coord]:
    """All six lattice neighbors of ``c``, board-independent."""
    r, i = c
    return [(r, i + 1), (r - 1, i), (r - 1, i - 1), (r, i - 1), (r + 1, i), (r + 1, i + 1)]


UnitTriangle = tuple[Coord, Coord, Coord]


def triangle(a: Coord, b: Coord, c: Coord) -> UnitTriangle:
    """Canonical (sorted) form of a unit triangle."""
    t = tuple(sorted((a, b, c)))
    return t  # type: ignore[return-value]


def _lattice_triangles(cells: Iterable[Coord]) -> list[UnitTriangle]:
    """Every unit triangle whose three corners all lie in ``cells``."""
    have = set(cells)
    out = []
    for (r, i) in sorted(have):
        up = ((r, i), (r + 1, i), (r + 1, i + 1))
        down = ((r, i), (r, i + 1), (r + 1, i + 1))
        for t in (up, down):
            if t[1] in have and t[2] in have:
                out.append(t)
    return out


class _Geometry:
    """Precomputed per-side geometry shared by every board of that side."""

    def __init__(self, side: int):
        self.side = side
        n = side
        self.playable: list[Coord] = [(r, i) for r in range(n) for i in range(r + 1)]
        self.index: dict[Coord, int] = {c: k for k, c in enumerate(self.playable)}
        self.count = len(self.playable)

        # Boundary arcs, each listed clockwise (apex at top).  The start color
        # of each arc is fixed so the ring's door parity is odd for every side,
        # which is what makes the trichromatic count odd for every coloring.
        right = [(r, r + 1) for r in range(-1, n)]
        bottom = [(n, i) for i in range(n, -1, -1)]
        left = [(r, -1) for r in range(n - 1, -2, -1)]
        self.arcs: dict[str, list[Coord]] = {"right": right, "bottom": bottom, "left": left}
        self.forbidden: dict[str, Color] = {
            "right": Color.SHADE,
            "bottom": Color.FILL,
            "left": Color.BARS,
        }
        arc_pairs = {
            "right": (Color.FILL, Color.BARS),
            "bottom": (Color.BARS, Color.SHADE),
            "left": (Color.SHADE, Color.FILL),
        }
        self.boundary: dict[Coord, Color] = {}
        for name, arc in self.arcs.items():
            a, b = arc_pairs[name]
            for k, coord in enumerate(arc):
                self.boundary[coord] = a if k % 2 == 0 else b

        universe = set(self.playable) | set(self.boundary)
        self.neighbors: dict[Coord, tuple[Coord, ...]] = {
            c: tuple(a for a in adjacent_coords(c) if a in universe) for c in universe
        }
        self.triangles: list[UnitTriangle] = _lattice_triangles(universe)
        self.triangles_of: dict[Coord, list[UnitTriangle]] = {c: [] for c in universe}
        for t in self.triangles:
            for c in t:
                self.triangles_of[c].append(t)

        # For each playable cell, the two companion cells of each incident
        # triangle, pre-resolved to ("cell index" | "fixed color") pairs.
        self.incident_pairs: list[list[tuple[int, int]]] = []
        for c in self.playable:
            pairs = []
            for t in self.triangles_of[c]:
                others = [x for x in t if x != c]
                enc = []
                for o in others:
                    if o in self.index:
                        enc.append(self.index[o])  # playable: look up at runtime
                    else:
                        enc.append(-int(self.boundary[o]))  # boundary: fixed color
                pairs.append((enc[0], enc[1]))
            self.incident_pairs.append(pairs)


@dataclass(frozen=True)
class Board:
    """Immutable board value: side length plus one color byte per playable cell."""

    side: int
    cells: bytes

    @property
    def geometry(self) -> _Geometry:
        return _geometry(self.side)

    def color_at(self, c: Coord) -> Optional[Color]:
        """Color of a playable or boundary cell; None when uncolored."""
        g = self.geometry
        if c in g.index:
            v = self.cells[g.index[c]]
            return Color(v) if v else None
        if c in g.boundary:
            return g.boundary[c]
        raise InvalidArgument(f"coordinate {c} not on a side-{self.side} board")

    def is_playable(self, c: Coord) -> bool:
        return c in self.geometry.index

    def is_boundary(self, c: Coord) -> bool:
        return c in self.geometry.boundary

    def uncolored(self) -> list[Coord]:
        g = self.geometry
        return [g.playable[k] for k, v in enumerate(self.cells) if v == 0]

    def colored(self) -> list[Coord]:
        g = self.geometry
        return [g.playable[k] for k, v in enumerate(self.cells) if v != 0]

    def is_complete(self) -> bool:
        return 0 not in self.cells


@lru_cache(maxsize=None)
def _geometry(side: int) -> _Geometry:
    return _Geometry(side)


def new_board(side: int) -> Board:
    if side < 1:
        raise InvalidArgument(f"side must be >= 1, got {side}")
    g = _geometry(side)
    return Board(side, bytes(g.count))


def neighbors(board: Board, c: Coord) -> set[Coord]:
    g = board.geometry
    if c not in g.neighbors:
        raise InvalidArgument(f"coordinate {c} not on a side-{board.side} board")
    return set(g.neighbors[c])


def unit_triangles(board: Board) -> list[UnitTriangle]:
    return list(board.geometry.triangles)


def is_bad_triangle(board: Board, t: UnitTriangle) -> bool:
    cols = [board.color_at(c) for c in t]
    if None in cols:
        return False
    return len(set(cols)) == 3


def _cell_value(cells: bytes, enc: int) -> int:
    """Resolve an incident-pair encoding: negative = fixed boundary color."""
    return -enc if enc < 0 else cells[enc]


def color_circle(board: Board, c: Coord, col: Color) -> tuple[Board, list[UnitTriangle]]:
    """Color one cell, returning the new board and any bad triangles created."""
    g = board.geometry
    if c not in g.index:
        reason = "boundary" if c in g.boundary else "off-board"
        raise IllegalMove(f"{c} is not a playable cell", reason)
    k = g.index[c]
    if board.cells[k] != 0:
        raise IllegalMove(f"{c} is already colored", "already-colored")
    buf = bytearray(board.cells)
    buf[k] = int(col)
    new_cells = bytes(buf)
    created = []
    for (pa, pb), t in zip(g.incident_pairs[k], g.triangles_of[c]):
        va = _cell_value(new_cells, pa)
        vb = _cell_value(new_cells, pb)
        if va and vb and va != vb and va != int(col) and vb != int(col):
            created.append(t)
    return Board(board.side, new_cells), created


def created_bad_count(board: Board, c: Coord, col: Color) -> int:
    """How many bad triangles coloring ``c`` with ``col`` would create."""
    g = board.geometry
    k = g.index[c]
    n = 0
    for (pa, pb) in g.incident_pairs[k]:
        va = _cell_value(board.cells, pa)
        vb = _cell_value(board.cells, pb)
        if va and vb and va != vb and va != int(col) and vb != int(col):
            n += 1
    return n


def safe_colors(board: Board, c: Coord) -> list[Color]:
    """Colors playable at ``c`` without immediately creating a bad triangle."""
    return [col for col in COLORS if created_bad_count(board, c, col) == 0]


def is_doomed(board: Board, c: Coord) -> bool:
    g = board.geometry
    k = g.index[c]
    if board.cells[k] != 0:
        return False
    return not safe_colors(board, c)


def doomed_circles(board: Board) -> set[Coord]:
    return {c for c in board.uncolored() if not safe_colors(board, c)}


def count_trichromatic(board: Board) -> int:
    if not board.is_complete():
        raise PreconditionViolation("count_trichromatic requires a complete coloring")
    g = board.geometry
    n = 0
    for t in g.triangles:
        a, b, c = (int(g.boundary[x]) if x in g.boundary else board.cells[g.index[x]] for x in t)
        if a != b and b != c and a != c:
            n += 1
    return n


def bad_triangles(board: Board) -> list[UnitTriangle]:
    """All currently-complete trichromatic triangles (partial boards allowed)."""
    return [t for t in board.geometry.triangles if is_bad_triangle(board, t)]


# ---------------------------------------------------------------------------
# Text format


def board_to_text(board: Board) -> str:
    g = board.geometry
    lines = [f"sperner v1 side={board.side}"]
    for r in range(board.side):
        lines.append("".join(_render_cell(board.cells[g.index[(r, i)]]) for i in range(r + 1)))
    for name in ("right", "bottom", "left"):
        chars = "".join(g.boundary[c].char for c in g.arcs[name])
        lines.append(f"boundary: {name} {chars}")
    return "\n".join(lines) + "\n"


def _render_cell(v: int) -> str:
    return "." if v == 0 else Color(v).char


def board_from_text(text: str) -> Board:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty board text", 1)
    header = lines[0].split()
    if len(header) != 3 or header[0] != "sperner" or header[1] != "v1" or not header[2].startswith("side="):
        raise ParseError(f"bad header {lines[0]!r}", 1)
    try:
        side = int(header[2][5:])
    except ValueError:
        raise ParseError(f"bad side in header {lines[0]!r}", 1) from None
    if side < 1:
        raise ParseError(f"side must be >= 1, got {side}", 1)
    if len(lines) < 1 + side + 3:
        raise ParseError(f"expected {side} row lines plus 3 boundary lines", len(lines))
    buf = bytearray(side * (side + 1) // 2)
    g = _geometry(side)
    k = 0
    for r in range(side):
        row = lines[1 + r]
        if len(row) != r + 1:
            raise ParseError(f"row {r} must have {r + 1} cells, got {len(row)}", 2 + r)
        for ch in row:
            if ch == ".":
                buf[k] = 0
            elif ch in _CHAR_COLORS:
                buf[k] = int(_CHAR_COLORS[ch])
            else:
                raise ParseError(f"bad cell character {ch!r}", 2 + r)
            k += 1
    for j, name in enumerate(("right", "bottom", "left")):
        ln = lines[1 + side + j]
        parts = ln.split()
        if len(parts) != 3 or parts[0] != "boundary:" or parts[1] != name:
            raise ParseError(f"expected 'boundary: {name} ...', got {ln!r}", 2 + side + j)
        expect = "".join(g.boundary[c].char for c in g.arcs[name])
        if parts[2] != expect:
            raise ParseError(f"boundary ring mismatch on {name} side", 2 + side + j)
    return Board(side, bytes(buf))
