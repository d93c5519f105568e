"""Behavioral verification of widget stencils.

A widget is embedded alone near the middle of a fresh board, with short path
stubs attached to its ports standing in for the incoming and outgoing routes.
The prescribed flow is then walked move by move under the real game rules; at
every step each unsanctioned legal move must either lose immediately or be
refuted by a punisher confined to the widget, within the widget's constant
ply bound, with free jumps counted as escapes (so the verdict transfers to
any compiled board the stencil is embedded in).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .board import Color, Coord, IllegalMove, adjacent_coords, color_circle, new_board
from .rules import GameState, Player, Variant, apply_move, legal_moves
from .solver import verify_punishment
from .widgets import (
    DIR_STEPS,
    OPEN,
    Port,
    Widget,
    build_single_path,
    build_two_path,
    transform_coord,
    transform_direction,
)

STUB_LEN = 4
_CHAR = {"B": Color.BARS, "S": Color.SHADE, "F": Color.FILL}


@dataclass
class Scenario:
    """One verification setup: which port the chain arrives on, plus the flow.

    The two stub cells nearest the entry port are walked automatically before
    the widget's own steps.  ``presets`` color widget cells before play begins
    and ``played_stubs`` colors whole port stubs (both are used to stage the
    variable widget's investigation phase, which happens after its set phase).

    Step forms:

        ("move", cell, color)           forced flow move
        ("choice", [(label, cell, color, [steps...]), ...])
        ("exit", port_index, walk, how) leave via a port; verify ``walk`` stub
                                        cells, colored per ``how`` ("follow"
                                        repeats the previous move's color)
        ("dead",)                       the mover must lose immediately
        ("end",)                        stop checking here
    """

    name: str
    entry_port: int
    entry_symbol: Color
    steps: list
    presets: list[tuple[Coord, Color]] = field(default_factory=list)
    played_stubs: dict[int, Color] = field(default_factory=dict)
    first_mover: Player = Player.HERO

    def transformed(self, rotation: int, reflect: bool) -> "Scenario":
        def tc(c: Coord) -> Coord:
            return transform_coord(c, rotation, reflect)

        def tsteps(steps: list) -> list:
            out = []
            for s in steps:
                if s[0] == "move":
                    out.append(("move", tc(s[1]), s[2]))
                elif s[0] == "choice":
                    out.append(
                        ("choice", [(lbl, tc(c), col, tsteps(sub)) for lbl, c, col, sub in s[1]])
                    )
                else:
                    out.append(s)
            return out

        return Scenario(
            self.name,
            self.entry_port,
            self.entry_symbol,
            tsteps(self.steps),
            [(tc(c), col) for c, col in self.presets],
            dict(self.played_stubs),
            self.first_mover,
        )


@dataclass
class Diagnostics:
    widget: str
    scenario: str
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def add(self, msg: str):
        self.problems.append(f"[{self.widget}/{self.scenario}] {msg}")


@dataclass
class Embedding:
    state: GameState
    region: set[Coord]  # absolute coords the punisher may use
    offset: Coord
    stub_runs: dict[int, list[Coord]]  # port index -> open run, widget-local, inside out

    def abs_coord(self, c: Coord) -> Coord:
        return (c[0] + self.offset[0], c[1] + self.offset[1])


def _rotation_sending_e_to(direction: str, reflect: bool) -> int:
    for rot in range(6):
        if transform_direction("E", rot, reflect) == direction:
            return rot
    raise AssertionError(direction)


def _stub_candidates(port: Port, reflect: bool) -> list[Widget]:
    """Path stubs aligned with ``port``, flank chirality matching the widget.

    The open run marches outward starting at port.pos + direction; in-port
    stubs are oriented so their flow axis points into the widget.
    """
    if port.path_type[0] == "single":
        bases = [build_single_path(STUB_LEN, port.path_type[1])]
    else:
        a, b = port.path_type[1], port.path_type[2]
        third = (set(Color) - {a, b}).pop()
        mapping = {Color.BARS: a, Color.FILL: b, Color.SHADE: third}
        # two lengths: toggles which flank-alternation phase meets the seam
        bases = [
            build_two_path(STUB_LEN).recolored(mapping),
            build_two_path(STUB_LEN + 1).recolored(mapping),
        ]
    d = port.direction
    flow_dir = (
        {"E": "W", "W": "E", "NE": "SW", "SW": "NE", "NW": "SE", "SE": "NW"}[d]
        if port.kind == "in"
        else d
    )
    rot = _rotation_sending_e_to(flow_dir, reflect)
    step = DIR_STEPS[d]
    out = []
    for base in bases:
        w = base.transformed(rot, reflect)
        opens = set(w.open_cells())
        inner = [c for c in opens if (c[0] - step[0], c[1] - step[1]) not in opens]
        anchor = inner[0]
        target = (port.pos[0] + step[0], port.pos[1] + step[1])
        out.append(w.translated(target[0] - anchor[0], target[1] - anchor[1]))
    return out


def embed_widget(widget: Widget, scenario: Scenario, reflect: bool = False) -> tuple[Embedding, Diagnostics]:
    diag = Diagnostics(widget.name, scenario.name)
    merged: dict[Coord, str] = dict(widget.cells)
    stub_runs: dict[int, list[Coord]] = {}
    soft: set[Coord] = set()  # cells exempt from the enclosure check

    for k, port in enumerate(widget.ports):
        placed = None
        for stub in _stub_candidates(port, reflect ^ bool(port.chirality)):
            if all(merged.get(c, v) == v for c, v in stub.cells.items()):
                placed = stub
                break
        if placed is None:
            diag.add(f"port {k} ({port.describe()}): stub conflicts with widget cells")
            continue
        for c, v in placed.cells.items():
            merged.setdefault(c, v)
        step = DIR_STEPS[port.direction]
        run = []
        c = (port.pos[0] + step[0], port.pos[1] + step[1])
        while merged.get(c) == OPEN:
            run.append(c)
            c = (c[0] + step[0], c[1] + step[1])
        stub_runs[k] = run
        far_end = c  # first non-open cell past the run
        if port.path_type[0] == "single":
            if far_end not in merged:
                merged[far_end] = port.path_type[1].char  # cap: forces nothing new
        elif k == scenario.entry_port:
            if far_end not in merged:
                merged[far_end] = scenario.entry_symbol.char
        else:
            soft.update(run[2:])  # un-capped two-symbol tail: context only

    for c, v in sorted(merged.items()):
        if v != OPEN or c in soft:
            continue
        for nb in adjacent_coords(c):
            if nb not in merged and not all(x in soft for x in [c]):
                diag.add(f"open cell {c} not enclosed (neighbor {nb} unspecified)")
                break

    # translate onto a board with margin 2 from the real boundary ring
    rmin = min(c[0] for c in merged)
    imin = min(c[1] for c in merged)
    dr0, di0 = 2 - rmin, 2 - imin
    over = max(c[1] + di0 - (c[0] + dr0) for c in merged)
    if over > -2:
        dr0 += over + 2
    side = max(c[0] + dr0 for c in merged) + 3
    offset = (dr0, di0)

    board = new_board(side)

    def paint(local: Coord, col: Color, what: str):
        nonlocal board
        ac = (local[0] + offset[0], local[1] + offset[1])
        try:
            board, created = color_circle(board, ac, col)
        except IllegalMove as e:
            diag.add(f"{what} {local}: {e}")
            return
        if created:
            diag.add(f"{what} {local}={col.name} creates a bad triangle")

    for c, v in sorted(merged.items()):
        if v != OPEN:
            paint(c, _CHAR[v], "stencil cell")

    entry_run = stub_runs.get(scenario.entry_port, [])
    if len(entry_run) < STUB_LEN:
        diag.add(f"entry stub truncated: {entry_run}")
        return Embedding(GameState(board, Variant.RESTRICTED), set(), offset, stub_runs), diag
    for c in entry_run[2:]:
        paint(c, scenario.entry_symbol, "entry chain")
    for port_idx, col in scenario.played_stubs.items():
        for c in stub_runs.get(port_idx, []):
            paint(c, col, f"played stub {port_idx}")
    for c, col in scenario.presets:
        paint(c, col, "preset")

    last_local = entry_run[2]
    region = {(c[0] + offset[0], c[1] + offset[1]) for c in merged}
    state = GameState(
        board,
        Variant.RESTRICTED,
        scenario.first_mover,
        (last_local[0] + offset[0], last_local[1] + offset[1]),
    )
    return Embedding(state, region, offset, stub_runs), diag


def walk_flow(
    widget: Widget,
    scenario: Scenario,
    emb: Embedding,
    diag: Diagnostics,
    check_deviations: bool = True,
) -> Optional[GameState]:
    """Walk the prescribed flow, verifying forcing and punishing deviations."""

    def check_alternatives(state: GameState, sanctioned: set) -> None:
        if not check_deviations:
            return
        for m in legal_moves(state):
            if m in sanctioned:
                continue
            child = apply_move(state, m)
            if child.loser is state.to_move:
                continue  # self-punishing
            if not verify_punishment(
                state, emb.region, m, widget.max_punish, conservative_jumps=True
            ):
                diag.add(
                    f"deviation {m} is neither losing nor punished within "
                    f"{widget.max_punish} plies"
                )

    def forced(state: GameState, local: Coord, col: Color, what: str) -> Optional[GameState]:
        mv = (emb.abs_coord(local), col)
        if mv not in legal_moves(state):
            diag.add(f"{what}: prescribed move {local} {col.name} illegal")
            return None
        check_alternatives(state, {mv})
        nxt = apply_move(state, mv)
        if nxt.loser is not None:
            diag.add(f"{what}: prescribed move {local} {col.name} lost the game")
            return None
        return nxt

    def run(state: Optional[GameState], steps: list) -> Optional[GameState]:
        for spec in steps:
            if state is None:
                return None
            kind = spec[0]
            if kind == "move":
                state = forced(state, spec[1], spec[2], "flow")
            elif kind == "choice":
                options = spec[1]
                sanctioned = {(emb.abs_coord(c), col) for _, c, col, _ in options}
                moves = set(legal_moves(state))
                missing = sanctioned - moves
                if missing:
                    diag.add(f"sanctioned options not legal: {sorted(missing)}")
                    return None
                check_alternatives(state, sanctioned)
                final = None
                for lbl, c, col, sub in options:
                    child = apply_move(state, (emb.abs_coord(c), col))
                    if child.loser is not None:
                        diag.add(f"option {lbl} loses immediately")
                        return None
                    final = run(child, sub)
                return final
            elif kind == "exit":
                _, port_idx, walk_n, how = spec
                cells = emb.stub_runs.get(port_idx, [])
                for j in range(min(walk_n, len(cells))):
                    col = state.board.color_at(state.last_move) if how == "follow" else how
                    state = forced(state, cells[j], col, f"exit[{port_idx}]")
                    if state is None:
                        return None
            elif kind == "dead":
                for m in legal_moves(state):
                    if apply_move(state, m).loser is None:
                        diag.add(f"mover should be dead but {m} survives")
                        return None
            elif kind == "end":
                return state
            else:
                diag.add(f"unknown step {spec!r}")
                return None
        return state

    entry_run = emb.stub_runs[scenario.entry_port]
    state: Optional[GameState] = emb.state
    for c in (entry_run[1], entry_run[0]):
        state = forced(state, c, scenario.entry_symbol, "entry")
        if state is None:
            return None
    return run(state, scenario.steps)


def verify_widget_scenarios(
    widget: Widget,
    scenarios: list[Scenario],
    rotation: int = 0,
    reflect: bool = False,
    check_deviations: bool = True,
) -> Diagnostics:
    """Run every scenario against one orientation of the widget."""
    total = Diagnostics(widget.name, f"rot={rotation},reflect={reflect}")
    w = widget.transformed(rotation, reflect)
    for sc in scenarios:
        sc_t = sc.transformed(rotation, reflect)
        emb, diag = embed_widget(w, sc_t, reflect=reflect)
        if diag.ok:
            walk_flow(w, sc_t, emb, diag, check_deviations)
        total.problems.extend(diag.problems)
    return total
