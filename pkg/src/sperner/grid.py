"""Companion fixed-point games on the square grid [1:n]^2.

2-D-Brouwer: three-color the grid under a fixed boundary coloring; whoever
completes a unit square containing all three colors loses.  Flow: assign
vectors from {(0,0),(1,0),(0,1)} under boundedness and direction preservation;
whoever assigns a zero vector loses.  Both games reuse the triangle game's
player/variant machinery and exhaustive theorem oracles back their rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .board import Color, COLORS, IllegalMove, InvalidArgument, InvalidState, ParseError, ResourceLimit
from .rules import Player, Variant

GridCoord = tuple[int, int]  # (x, y), both in 1..n

Vector = tuple[int, int]
VECTORS: tuple[Vector, ...] = ((0, 0), (1, 0), (0, 1))
_VECTOR_CHARS = {(0, 0): "0", (1, 0): "R", (0, 1): "U"}
_CHAR_VECTORS = {v: k for k, v in _VECTOR_CHARS.items()}


def _boundary_color(n: int, x: int, y: int) -> Optional[Color]:
    """Fixed boundary: left filled, bottom (minus left corner) shaded, rest barred."""
    if x == 1:
        return Color.FILL
    if y == 1:
        return Color.SHADE
    if x == n or y == n:
        return Color.BARS
    return None


@dataclass(frozen=True)
class GridBoard:
    n: int
    cells: bytes  # row-major (y-major) colors for interior cells only, 0 = uncolored

    @property
    def interior(self) -> list[GridCoord]:
        return _interior(self.n)

    def color_at(self, c: GridCoord) -> Optional[Color]:
        x, y = c
        if not (1 <= x <= self.n and 1 <= y <= self.n):
            raise InvalidArgument(f"{c} outside [1:{self.n}]^2")
        b = _boundary_color(self.n, x, y)
        if b is not None:
            return b
        v = self.cells[_interior_index(self.n, c)]
        return Color(v) if v else None

    def uncolored(self) -> list[GridCoord]:
        return [c for c in self.interior if self.cells[_interior_index(self.n, c)] == 0]

    def is_complete(self) -> bool:
        return 0 not in self.cells


def _interior(n: int) -> list[GridCoord]:
    return [(x, y) for y in range(2, n) for x in range(2, n)]


def _interior_index(n: int, c: GridCoord) -> int:
    x, y = c
    if not (2 <= x <= n - 1 and 2 <= y <= n - 1):
        raise InvalidArgument(f"{c} is not an interior cell of [1:{n}]^2")
    return (y - 2) * (n - 2) + (x - 2)


def brouwer_new(n: int) -> GridBoard:
    if n < 3:
        raise InvalidArgument("2-D-Brouwer needs n >= 3 (no interior otherwise)")
    return GridBoard(n, bytes((n - 2) * (n - 2)))


def unit_squares(n: int) -> list[tuple[GridCoord, GridCoord, GridCoord, GridCoord]]:
    return [
        ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))
        for y in range(1, n)
        for x in range(1, n)
    ]


def square_is_bad(board: GridBoard, sq) -> bool:
    cols = [board.color_at(c) for c in sq]
    if None in cols:
        return False
    return set(cols) >= {Color.BARS, Color.SHADE, Color.FILL}


def _squares_touching(n: int, c: GridCoord):
    x, y = c
    for sx in (x - 1, x):
        for sy in (y - 1, y):
            if 1 <= sx < n and 1 <= sy < n:
                yield ((sx, sy), (sx + 1, sy), (sx, sy + 1), (sx + 1, sy + 1))


def brouwer_created_bad(board: GridBoard, c: GridCoord, col: Color) -> int:
    n_bad = 0
    for sq in _squares_touching(board.n, c):
        cols = []
        complete = True
        for cc in sq:
            v = col if cc == c else board.color_at(cc)
            if v is None:
                complete = False
                break
            cols.append(v)
        if complete and set(cols) >= {Color.BARS, Color.SHADE, Color.FILL}:
            n_bad += 1
    return n_bad


def _grid_adjacent(a: GridCoord, b: GridCoord) -> bool:
    return a != b and abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


@dataclass(frozen=True)
class BrouwerState:
    board: GridBoard
    variant: Variant
    to_move: Player = Player.HERO
    last_move: Optional[GridCoord] = None
    loser: Optional[Player] = None

    @property
    def ongoing(self) -> bool:
        return self.loser is None


def brouwer_initial(n: int, variant: Variant = Variant.RESTRICTED) -> BrouwerState:
    return BrouwerState(brouwer_new(n), variant)


def brouwer_legal_moves(state: BrouwerState) -> list[tuple[GridCoord, Color]]:
    if not state.ongoing:
        raise InvalidState("game is over")
    cells = state.board.uncolored()
    if state.variant is Variant.RESTRICTED and state.last_move is not None:
        adj = [c for c in cells if _grid_adjacent(c, state.last_move)]
        if adj:
            cells = adj
    return [(c, col) for c in sorted(cells) for col in COLORS]


def brouwer_apply(state: BrouwerState, move: tuple[GridCoord, Color]) -> BrouwerState:
    if not state.ongoing:
        raise InvalidState("game is over")
    c, col = move
    if move not in brouwer_legal_moves(state):
        k = _interior_index(state.board.n, c)
        if state.board.cells[k] != 0:
            raise IllegalMove(f"{c} is already colored", "already-colored")
        raise IllegalMove(f"{c} is not adjacent to {state.last_move}", "not-adjacent-when-required")
    created = brouwer_created_bad(state.board, c, col)
    buf = bytearray(state.board.cells)
    buf[_interior_index(state.board.n, c)] = int(col)
    return BrouwerState(
        GridBoard(state.board.n, bytes(buf)),
        state.variant,
        state.to_move.opponent,
        c,
        state.to_move if created else None,
    )


def brouwer_theorem_check(n: int) -> bool:
    """Every complete interior coloring yields a trichromatic unit square."""
    if n > 5:
        raise ResourceLimit("exhaustive Brouwer check limited to n <= 5")
    interior = _interior(n)
    squares = unit_squares(n)
    for combo in product((1, 2, 3), repeat=len(interior)):
        board = GridBoard(n, bytes(combo))
        if not any(square_is_bad(board, sq) for sq in squares):
            return False
    return True


# ---------------------------------------------------------------------------
# Flow game


@dataclass(frozen=True)
class VectorAssignment:
    n: int
    values: tuple[Optional[Vector], ...]  # row-major over [1:n]^2, None = unassigned

    def value_at(self, c: GridCoord) -> Optional[Vector]:
        x, y = c
        return self.values[(y - 1) * self.n + (x - 1)]

    def cells(self) -> list[GridCoord]:
        return [(x, y) for y in range(1, self.n + 1) for x in range(1, self.n + 1)]

    def unassigned(self) -> list[GridCoord]:
        return [c for c in self.cells() if self.value_at(c) is None]

    def is_complete(self) -> bool:
        return None not in self.values


def flow_new(n: int) -> VectorAssignment:
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    return VectorAssignment(n, (None,) * (n * n))


def _bounded(n: int, c: GridCoord, vec: Vector) -> bool:
    x, y = c[0] + vec[0], c[1] + vec[1]
    return 1 <= x <= n and 1 <= y <= n


def _direction_ok(a: Vector, b: Vector) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) <= 1


def flow_legal_values(a: VectorAssignment, v: GridCoord) -> set[Vector]:
    """Vectors assignable at ``v`` without breaking either condition.

    Direction preservation is checked against already-assigned grid-adjacent
    cells (Chebyshev distance 1); assigning (0,0) is legal but loses.
    """
    if a.value_at(v) is not None:
        raise IllegalMove(f"{v} is already assigned", "already-colored")
    out = set()
    for vec in VECTORS:
        if not _bounded(a.n, v, vec):
            continue
        ok = True
        for c in a.cells():
            w = a.value_at(c)
            if w is not None and _grid_adjacent(c, v) and not _direction_ok(vec, w):
                ok = False
                break
        if ok:
            out.add(vec)
    return out


@dataclass(frozen=True)
class FlowState:
    assignment: VectorAssignment
    variant: Variant
    to_move: Player = Player.HERO
    last_move: Optional[GridCoord] = None
    loser: Optional[Player] = None

    @property
    def ongoing(self) -> bool:
        return self.loser is None


def flow_initial(n: int, variant: Variant = Variant.RESTRICTED) -> FlowState:
    return FlowState(flow_new(n), variant)


def flow_legal_moves(state: FlowState) -> list[tuple[GridCoord, Vector]]:
    if not state.ongoing:
        raise InvalidState("game is over")
    cells = state.assignment.unassigned()
    if state.variant is Variant.RESTRICTED and state.last_move is not None:
        adj = [c for c in cells if _grid_adjacent(c, state.last_move)]
        if adj:
            cells = adj
    return [
        (c, vec)
        for c in sorted(cells)
        for vec in sorted(flow_legal_values(state.assignment, c))
    ]


def flow_apply(state: FlowState, move: tuple[GridCoord, Vector]) -> FlowState:
    if not state.ongoing:
        raise InvalidState("game is over")
    c, vec = move
    if move not in flow_legal_moves(state):
        raise IllegalMove(f"{move} is not legal here", "illegal-assignment")
    vals = list(state.assignment.values)
    vals[(c[1] - 1) * state.assignment.n + (c[0] - 1)] = vec
    return FlowState(
        VectorAssignment(state.assignment.n, tuple(vals)),
        state.variant,
        state.to_move.opponent,
        c,
        state.to_move if vec == (0, 0) else None,
    )


def flow_theorem_check(n: int) -> bool:
    """Every complete bounded direction-preserving assignment has a zero point."""
    if n > 3:
        raise ResourceLimit("exhaustive Flow check limited to n <= 3")
    cells = [(x, y) for y in range(1, n + 1) for x in range(1, n + 1)]
    for combo in product(VECTORS, repeat=len(cells)):
        valid = True
        for k, c in enumerate(cells):
            if not _bounded(n, c, combo[k]):
                valid = False
                break
        if valid:
            for i in range(len(cells)):
                for j in range(i + 1, len(cells)):
                    if _grid_adjacent(cells[i], cells[j]) and not _direction_ok(combo[i], combo[j]):
                        valid = False
                        break
                if not valid:
                    break
        if valid and (0, 0) not in combo:
            return False
    return True


# ---------------------------------------------------------------------------
# Text formats


def grid_to_text(board: GridBoard) -> str:
    lines = [f"brouwer v1 n={board.n}"]
    for y in range(board.n, 0, -1):
        row = []
        for x in range(1, board.n + 1):
            col = board.color_at((x, y))
            row.append("." if col is None else col.char)
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def grid_from_text(text: str) -> GridBoard:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("brouwer v1 n="):
        raise ParseError("bad brouwer header", 1)
    n = int(lines[0].split("=", 1)[1])
    board = brouwer_new(n)
    buf = bytearray(board.cells)
    if len(lines) < 1 + n:
        raise ParseError(f"expected {n} rows", len(lines))
    for k, y in enumerate(range(n, 0, -1)):
        row = lines[1 + k]
        if len(row) != n:
            raise ParseError(f"row must have {n} cells", 2 + k)
        for x0, ch in enumerate(row):
            x = x0 + 1
            b = _boundary_color(n, x, y)
            if b is not None:
                if ch != b.char:
                    raise ParseError(f"boundary mismatch at {(x, y)}", 2 + k)
                continue
            if ch == ".":
                continue
            if ch not in "BSF":
                raise ParseError(f"bad cell character {ch!r}", 2 + k)
            buf[_interior_index(n, (x, y))] = int(Color({"B": 1, "S": 2, "F": 3}[ch]))
    return GridBoard(n, bytes(buf))


def flow_to_text(a: VectorAssignment) -> str:
    lines = [f"flow v1 n={a.n}"]
    for y in range(a.n, 0, -1):
        row = []
        for x in range(1, a.n + 1):
            v = a.value_at((x, y))
            row.append("." if v is None else _VECTOR_CHARS[v])
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def flow_from_text(text: str) -> VectorAssignment:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("flow v1 n="):
        raise ParseError("bad flow header", 1)
    n = int(lines[0].split("=", 1)[1])
    vals: list[Optional[Vector]] = [None] * (n * n)
    if len(lines) < 1 + n:
        raise ParseError(f"expected {n} rows", len(lines))
    for k, y in enumerate(range(n, 0, -1)):
        row = lines[1 + k]
        if len(row) != n:
            raise ParseError(f"row must have {n} cells", 2 + k)
        for x0, ch in enumerate(row):
            if ch == ".":
                continue
            if ch not in _CHAR_VECTORS:
                raise ParseError(f"bad vector character {ch!r}", 2 + k)
            vals[(y - 1) * n + x0] = _CHAR_VECTORS[ch]
    return VectorAssignment(n, tuple(vals))


# ---------------------------------------------------------------------------
# Solver adapters


from .solver import GameRules, SearchLimits, SolveResult, solve_game


class _BrouwerRules(GameRules):
    def moves(self, state):
        return brouwer_legal_moves(state)

    def apply(self, state, move):
        return brouwer_apply(state, move)

    def key(self, state):
        return (state.board.cells, state.last_move)


class _FlowRules(GameRules):
    def moves(self, state):
        return flow_legal_moves(state)

    def apply(self, state, move):
        return flow_apply(state, move)

    def key(self, state):
        return (state.assignment.values, state.last_move)


BROUWER_RULES = _BrouwerRules()
FLOW_RULES = _FlowRules()


def brouwer_solve(state: BrouwerState, limits: SearchLimits = SearchLimits()) -> SolveResult:
    return solve_game(state, BROUWER_RULES, limits)


def flow_solve(state: FlowState, limits: SearchLimits = SearchLimits()) -> SolveResult:
    return solve_game(state, FLOW_RULES, limits)


def grid_no_draw_check(n: int) -> bool:
    """Every maximal legal sequence of either grid game ends with a loss."""
    if n > 3:
        raise ResourceLimit("exhaustive grid no-draw check limited to n <= 3")
    for variant in (Variant.RESTRICTED, Variant.UNRESTRICTED):
        seen: set = set()

        def walk_brouwer(state: BrouwerState) -> bool:
            key = (state.board.cells, state.last_move, state.variant)
            if key in seen:
                return True
            seen.add(key)
            moves = brouwer_legal_moves(state)
            if not moves:
                return False  # complete board, nobody lost: a draw
            for m in moves:
                child = brouwer_apply(state, m)
                if child.loser is None and not walk_brouwer(child):
                    return False
            return True

        if n >= 3 and not walk_brouwer(brouwer_initial(n, variant)):
            return False

        seen = set()

        def walk_flow(state: FlowState) -> bool:
            key = (state.assignment.values, state.last_move, state.variant)
            if key in seen:
                return True
            seen.add(key)
            moves = flow_legal_moves(state)
            if not moves:
                return False  # stalled with nobody lost: a draw
            for m in moves:
                child = flow_apply(state, m)
                if child.loser is None and not walk_flow(child):
                    return False
            return True

        if not walk_flow(flow_initial(n, variant)):
            return False
    return True
