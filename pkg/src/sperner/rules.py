"""Game-state semantics: move legality, loss detection, island legality.

Two variants share one state type.  In the restricted game a player must play
adjacent to the last-colored circle whenever that circle has an uncolored
neighbor; otherwise (and always in the unrestricted game) any uncolored circle
may be chosen.  Doomed circles are legal moves; playing one simply loses.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .board import (
    Board,
    Color,
    COLORS,
    Coord,
    IllegalMove,
    InvalidState,
    ParseError,
    ResourceLimit,
    bad_triangles,
    board_from_text,
    board_to_text,
    color_circle,
    new_board,
)


class Variant(Enum):
    RESTRICTED = "restricted"
    UNRESTRICTED = "unrestricted"


class Player(Enum):
    HERO = "hero"
    ADVERSARY = "adversary"

    @property
    def opponent(self) -> "Player":
        return Player.ADVERSARY if self is Player.HERO else Player.HERO


Move = tuple[Coord, Color]


@dataclass(frozen=True)
class GameState:
    board: Board
    variant: Variant
    to_move: Player = Player.HERO
    last_move: Optional[Coord] = None
    loser: Optional[Player] = None

    @property
    def ongoing(self) -> bool:
        return self.loser is None


def initial_state(side: int, variant: Variant = Variant.RESTRICTED) -> GameState:
    return GameState(new_board(side), variant)


def forced_cells(state: GameState) -> Optional[list[Coord]]:
    """Cells the mover is restricted to, or None when placement is free."""
    if state.variant is Variant.UNRESTRICTED or state.last_move is None:
        return None
    g = state.board.geometry
    open_adj = [
        c
        for c in g.neighbors[state.last_move]
        if c in g.index and state.board.cells[g.index[c]] == 0
    ]
    return open_adj if open_adj else None


def legal_moves(state: GameState) -> list[Move]:
    if not state.ongoing:
        raise InvalidState("game is over; no legal moves")
    cells = forced_cells(state)
    if cells is None:
        cells = state.board.uncolored()
    return [(c, col) for c in sorted(cells) for col in COLORS]


def apply_move(state: GameState, move: Move) -> GameState:
    if not state.ongoing:
        raise InvalidState("game is over")
    coord, col = move
    restricted = forced_cells(state)
    if restricted is not None and coord not in restricted:
        g = state.board.geometry
        if coord in g.index and state.board.cells[g.index[coord]] != 0:
            raise IllegalMove(f"{coord} is already colored", "already-colored")
        raise IllegalMove(
            f"{coord} is not adjacent to the last move {state.last_move}",
            "not-adjacent-when-required",
        )
    new_board_, created = color_circle(state.board, coord, col)
    return GameState(
        board=new_board_,
        variant=state.variant,
        to_move=state.to_move.opponent,
        last_move=coord,
        loser=state.to_move if created else None,
    )


# ---------------------------------------------------------------------------
# Islands and position legality


@dataclass(frozen=True)
class Island:
    cells: frozenset[Coord]


def islands(board: Board) -> list[Island]:
    """Maximal connected components of colored playable cells."""
    g = board.geometry
    colored = {c for c in g.playable if board.cells[g.index[c]] != 0}
    seen: set[Coord] = set()
    out = []
    for start in sorted(colored):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for nb in g.neighbors[c]:
                if nb in colored and nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        out.append(Island(frozenset(comp)))
    return out


def surrounded_cells(board: Board, isl: Island) -> list[Coord]:
    """Island cells all of whose neighbors (playable or boundary) are colored."""
    g = board.geometry
    out = []
    for c in isl.cells:
        if all(
            nb in g.boundary or board.cells[g.index[nb]] != 0 for nb in g.neighbors[c]
        ):
            out.append(c)
    return sorted(out)


def island_is_anchored(board: Board, isl: Island, last_move: Optional[Coord]) -> bool:
    if last_move is not None and last_move in isl.cells:
        return True
    return bool(surrounded_cells(board, isl))


def is_plausibly_legal_state(state: GameState) -> bool:
    """Necessary condition for reachability: the anchored-island check.

    Every island must contain a fully-surrounded cell, except at most the one
    holding the last move.  Boards carrying a bad triangle are only plausible
    when the state records the corresponding loss.  The island condition stems
    from the adjacency rule, so it binds the restricted game only; in the
    unrestricted game any bad-free coloring is reachable in any order.
    """
    if bad_triangles(state.board) and state.loser is None:
        return False
    if state.board.colored() and state.last_move is None:
        return False
    if state.variant is Variant.UNRESTRICTED:
        return True
    unanchored = [
        isl
        for isl in islands(state.board)
        if not island_is_anchored(state.board, isl, state.last_move)
    ]
    return not unanchored


# ---------------------------------------------------------------------------
# Exponential reconstruction oracle


def reconstruct_play_sequence(
    state: GameState, budget: int = 25
) -> Optional[list[Move]]:
    """A legal move sequence from the empty board reproducing this coloring.

    Returns None when no such sequence exists.  The coloring is reproduced
    exactly, with the final move landing on ``state.last_move``.  Colors never
    need backtracking (any partial subset of a bad-free coloring is bad-free;
    for lost states the final move is the only bad-creating one), so the search
    is purely over cell orderings: chains must stay inside the target set and
    may only jump when the chain head is fully surrounded.
    """
    board = state.board
    g = board.geometry
    colored = [c for c in g.playable if board.cells[g.index[c]] != 0]
    if len(colored) > budget:
        raise ResourceLimit(
            f"{len(colored)} colored cells exceed reconstruction budget {budget}"
        )
    if not colored:
        return [] if state.last_move is None else None
    if state.last_move is None or state.last_move not in set(colored):
        return None
    # Any intermediate board is a subset of the final one minus the last move,
    # so that prefix must already be bad-free for any order to be legal.
    for t in bad_triangles(board):
        if state.last_move not in t:
            return None

    if state.variant is Variant.UNRESTRICTED:
        order = sorted(set(colored) - {state.last_move}) + [state.last_move]
        return [(c, board.color_at(c)) for c in order]  # type: ignore[misc]

    isles = islands(board)
    last_isle = next(isl for isl in isles if state.last_move in isl.cells)
    rest = [isl for isl in isles if isl is not last_isle]

    order: list[Coord] = []
    for isl in rest:
        seq = _order_island(board, isl, end_at=None)
        if seq is None:
            return None
        order.extend(seq)
    seq = _order_island(board, last_isle, end_at=state.last_move)
    if seq is None:
        return None
    order.extend(seq)
    return [(c, board.color_at(c)) for c in order]  # type: ignore[misc]


def _order_island(board: Board, isl: Island, end_at: Optional[Coord]) -> Optional[list[Coord]]:
    """Order one island's cells into legal chains.

    A chain may end (allowing a jump to the next chain) only when its head has
    no uncolored neighbor on the whole board; the island's final head must be
    ``end_at`` when given, else fully surrounded (so play can leave the island).
    Cells outside the island are uncolored in the target, so a head adjacent to
    one can never rest there — the chain must keep growing inside the island.
    """
    g = board.geometry
    cells = sorted(isl.cells)
    idx = {c: k for k, c in enumerate(cells)}
    full = (1 << len(cells)) - 1

    # Neighbors inside the island, and whether a cell has any neighbor that is
    # uncolored in the final position (such a cell can never be a resting head).
    inner: list[list[int]] = []
    open_adjacent: list[bool] = []
    for c in cells:
        inner.append([idx[nb] for nb in g.neighbors[c] if nb in idx])
        open_adjacent.append(
            any(
                nb in g.index and board.cells[g.index[nb]] == 0
                for nb in g.neighbors[c]
            )
        )

    end_idx = idx[end_at] if end_at is not None else None
    failed: set[tuple[int, int]] = set()

    def surrounded(mask: int, k: int) -> bool:
        # No uncolored board neighbor: nothing outside the island, and every
        # island neighbor already colored in `mask`.
        return not open_adjacent[k] and all(mask >> j & 1 for j in inner[k])

    def extensions(mask: int, k: int) -> list[int]:
        return [j for j in inner[k] if not mask >> j & 1]

    import sys

    sys.setrecursionlimit(10000)

    def search(mask: int, head: int) -> Optional[list[int]]:
        if (mask, head) in failed:
            return None
        if mask == full:
            if end_idx is not None:
                ok = head == end_idx
            else:
                ok = surrounded(mask, head)
            return [] if ok else None
        ext = extensions(mask, head)
        if ext:
            # Must keep chaining; prefer the most constrained continuation.
            ext.sort(key=lambda j: len(extensions(mask | 1 << j, j)))
            for j in ext:
                res = search(mask | 1 << j, j)
                if res is not None:
                    return [j] + res
        elif surrounded(mask, head):
            remaining = [j for j in range(len(cells)) if not mask >> j & 1]
            remaining.sort(key=lambda j: -sum(mask >> q & 1 for q in inner[j]))
            for j in remaining:
                res = search(mask | 1 << j, j)
                if res is not None:
                    return [j] + res
        failed.add((mask, head))
        return None

    starts = list(range(len(cells)))
    starts.sort(key=lambda j: -sum(1 for q in inner[j]))
    for s in starts:
        res = search(1 << s, s)
        if res is not None:
            return [cells[s]] + [cells[j] for j in res]
    return None


# ---------------------------------------------------------------------------
# Serialization


def state_to_text(state: GameState) -> str:
    board_text = board_to_text(state.board)
    lines = board_text.splitlines()
    header = [
        lines[0],
        f"variant={state.variant.value}",
        f"to_move={state.to_move.value}",
        "last=none" if state.last_move is None else f"last={state.last_move[0]},{state.last_move[1]}",
    ]
    if state.loser is not None:
        header.append(f"lost_by={state.loser.value}")
    return "\n".join(header + lines[1:]) + "\n"


def state_from_text(text: str) -> GameState:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty state text", 1)
    header_lines = []
    body = [lines[0]]
    loser = None
    variant = None
    to_move = None
    last: Optional[Coord] = None
    seen_last = False
    for ln, raw in enumerate(lines[1:], start=2):
        if raw.startswith("variant="):
            variant = Variant(raw[8:])
            header_lines.append(raw)
        elif raw.startswith("to_move="):
            to_move = Player(raw[8:])
            header_lines.append(raw)
        elif raw.startswith("last="):
            seen_last = True
            if raw[5:] != "none":
                parts = raw[5:].split(",")
                if len(parts) != 2:
                    raise ParseError(f"bad last move {raw!r}", ln)
                last = (int(parts[0]), int(parts[1]))
            header_lines.append(raw)
        elif raw.startswith("lost_by="):
            loser = Player(raw[8:])
            header_lines.append(raw)
        else:
            body.append(raw)
    if variant is None or to_move is None or not seen_last:
        raise ParseError("missing variant=/to_move=/last= header line", 1)
    board = board_from_text("\n".join(body) + "\n")
    return GameState(board, variant, to_move, last, loser)
