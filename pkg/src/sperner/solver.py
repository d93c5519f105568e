"""Exact game-theoretic evaluation and the experiment harnesses built on it.

The solver is a plain negamax over immutable states.  Values are relative to
the player to move, so the memo key is (cells, last_move) only — the variant
is fixed per search and the mover's identity is irrelevant to the value.
Distances to the end are tracked so principal variations are sensible: the
winner ends the game as fast as possible, the loser resists as long as
possible.  This also keeps results deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .board import (
    Board,
    Color,
    COLORS,
    Coord,
    InvalidArgument,
    InvalidState,
    ResourceLimit,
    created_bad_count,
    doomed_circles,
)
from .rules import GameState, Move, Player, Variant, apply_move, forced_cells, legal_moves


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 50_000_000
    max_depth: int = 0  # 0 = unlimited
    use_memo: bool = True

    def __post_init__(self):
        if self.max_nodes < 1:
            raise InvalidArgument("max_nodes must be >= 1")


@dataclass
class SolveResult:
    winner: Player
    principal_variation: list[Move]
    nodes_visited: int
    proof_depth: int


class GameRules:
    """The minimal game interface the search needs.

    Both the triangle game and the grid games plug in here: a state exposes
    ``to_move`` / ``loser``; the rules provide move generation, application and
    a memo key.  Keys must identify positions up to mover-relative value (the
    mover's identity itself is excluded on purpose).
    """

    def moves(self, state):
        raise NotImplementedError

    def apply(self, state, move):
        raise NotImplementedError

    def key(self, state):
        raise NotImplementedError


class _TriangleRules(GameRules):
    def moves(self, state):
        return legal_moves(state)

    def apply(self, state, move):
        return apply_move(state, move)

    def key(self, state):
        return (state.board.cells, state.last_move)


TRIANGLE_RULES = _TriangleRules()


class _Search:
    def __init__(self, rules: GameRules, limits: SearchLimits):
        self.rules = rules
        self.limits = limits
        self.nodes = 0
        # key -> (mover_wins, distance_to_end, best_move)
        self.memo: dict = {}

    def value(self, state, depth: int):
        key = self.rules.key(state)
        if self.limits.use_memo and key in self.memo:
            return self.memo[key]
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise ResourceLimit("node limit exceeded", self.nodes)
        if self.limits.max_depth and depth > self.limits.max_depth:
            raise ResourceLimit("depth limit exceeded", self.nodes)

        best_win = None  # (dist, move), minimize dist
        best_loss = None  # maximize dist
        for move in self.rules.moves(state):
            child = self.rules.apply(state, move)
            if child.loser is not None:
                # The mover just lost: this move ends the game in 1 ply.
                if best_loss is None:
                    best_loss = (1, move)
                continue
            opp_wins, dist, _ = self.value(child, depth + 1)
            if not opp_wins:
                if best_win is None or dist + 1 < best_win[0]:
                    best_win = (dist + 1, move)
            else:
                if best_loss is None or dist + 1 > best_loss[0]:
                    best_loss = (dist + 1, move)
        if best_win is not None:
            result = (True, best_win[0], best_win[1])
        else:
            assert best_loss is not None, "a mover always has at least one legal move"
            result = (False, best_loss[0], best_loss[1])
        if self.limits.use_memo:
            self.memo[key] = result
        return result


def solve_game(state, rules: GameRules, limits: SearchLimits = SearchLimits()) -> SolveResult:
    """Exact value of any game exposing the GameRules interface."""
    if state.loser is not None:
        raise InvalidState("cannot solve a finished game")
    search = _Search(rules, limits)
    mover_wins, dist, _ = search.value(state, 0)
    winner = state.to_move if mover_wins else state.to_move.opponent

    pv = []
    cur = state
    while cur.loser is None:
        key = rules.key(cur)
        if key in search.memo:
            move = search.memo[key][2]
        else:  # memo disabled: re-evaluate (cheap relative to the first pass)
            move = search.value(cur, 0)[2]
        pv.append(move)
        cur = rules.apply(cur, move)
    assert cur.loser is winner.opponent
    return SolveResult(winner, pv, search.nodes, len(pv))


def solve(state: GameState, limits: SearchLimits = SearchLimits()) -> SolveResult:
    if not state.ongoing:
        raise InvalidState("cannot solve a finished game")
    return solve_game(state, TRIANGLE_RULES, limits)


@dataclass
class BestMove:
    coord: Coord
    color: Color
    resigned: bool = False
    solved: bool = False
    winner: Optional[Player] = None


def best_move(state: GameState, budget: SearchLimits = SearchLimits(max_nodes=200_000)) -> BestMove:
    """Engine move choice: exact when the budget allows, heuristic otherwise."""
    if not state.ongoing:
        raise InvalidState("game is over")
    moves = legal_moves(state)
    survivors = []
    for m in moves:
        if created_bad_count(state.board, m[0], m[1]) == 0:
            survivors.append(m)
    if not survivors:
        return BestMove(moves[0][0], moves[0][1], resigned=True)
    try:
        result = solve(state, budget)
    except ResourceLimit:
        scored = []
        for m in survivors:
            child = apply_move(state, m)
            cells = forced_cells(child)
            if cells is None:
                cells = child.board.uncolored()
            doomed = doomed_circles(child.board)
            pressure = sum(1 for c in cells if c in doomed)
            safe = len(cells) - pressure
            scored.append((-(pressure - safe), m))
        scored.sort(key=lambda x: (x[0], x[1]))
        m = scored[0][1]
        return BestMove(m[0], m[1])
    m = result.principal_variation[0]
    return BestMove(m[0], m[1], solved=True, winner=result.winner)


# ---------------------------------------------------------------------------
# Punishment verification


def verify_punishment(
    state: GameState,
    region: set[Coord],
    deviation: Move,
    max_plies: int,
    *,
    conservative_jumps: bool = False,
) -> bool:
    """Check that ``deviation`` is refuted by play confined to ``region``.

    After the deviation is applied, the punishing player (the opponent of the
    deviator) must have a strategy using only cells in ``region`` that forces
    the deviator to create a bad triangle within ``max_plies`` further plies,
    whatever the deviator replies.  With ``conservative_jumps`` any deviator
    turn on which the adjacency rule does not bind (a free jump) counts as an
    escape, so a True result transfers to any larger board the pattern is
    embedded in.
    """
    if max_plies <= 0:
        raise InvalidArgument("max_plies must be positive")
    ok, _ = punishment_strategy(
        state, region, deviation, max_plies, conservative_jumps=conservative_jumps
    )
    return ok


def punishment_strategy(
    state: GameState,
    region: set[Coord],
    deviation: Move,
    max_plies: int,
    *,
    conservative_jumps: bool = False,
) -> tuple[bool, dict[tuple[bytes, Optional[Coord]], Move]]:
    """Like verify_punishment but also returns the punisher's strategy table."""
    if deviation not in legal_moves(state):
        raise InvalidArgument(f"deviation {deviation} is not legal here")
    after = apply_move(state, deviation)
    strategy: dict[tuple[bytes, Optional[Coord]], Move] = {}
    if after.loser is not None:
        return True, strategy  # self-punishing deviation: lost in 0 further plies

    deviator = state.to_move

    def punisher_turn(s: GameState, plies_left: int) -> bool:
        if plies_left <= 0:
            return False
        for move in legal_moves(s):
            if move[0] not in region:
                continue
            child = apply_move(s, move)
            if child.loser is not None:
                continue  # punisher may not suicide
            if deviator_turn(child, plies_left - 1):
                strategy[(s.board.cells, s.last_move)] = move
                return True
        return False

    def deviator_turn(s: GameState, plies_left: int) -> bool:
        # Every deviator reply must lose within the remaining budget; their
        # own (forced) losing move consumes a ply.
        if plies_left <= 0:
            return False
        if conservative_jumps and forced_cells(s) is None:
            return False  # free placement available: treat as an escape
        for move in legal_moves(s):
            child = apply_move(s, move)
            if child.loser is not None:
                continue  # deviator died on this reply: fine
            if not punisher_turn(child, plies_left - 1):
                return False
        return True

    ok = punisher_turn(after, max_plies)
    return ok, strategy


# ---------------------------------------------------------------------------
# Draw impossibility


def verify_no_draw(side: int, max_side: int = 3) -> bool:
    """Exhaustively confirm no maximal play reaches a complete bad-free board."""
    if side > max_side:
        raise ResourceLimit(f"exhaustive no-draw check limited to side <= {max_side}")
    from .rules import initial_state

    for variant in (Variant.RESTRICTED, Variant.UNRESTRICTED):
        seen: set[tuple[bytes, Optional[Coord]]] = set()

        def walk(state: GameState) -> bool:
            key = (state.board.cells, state.last_move)
            if key in seen:
                return True
            seen.add(key)
            if state.board.is_complete():
                return False  # reached a complete coloring without a loss
            for move in legal_moves(state):
                child = apply_move(state, move)
                if child.loser is not None:
                    continue
                if not walk(child):
                    return False
            return True

        if not walk(initial_state(side, variant)):
            return False
    return True


# ---------------------------------------------------------------------------
# Parity experiment (unrestricted game)


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class RandomTrials:
    trials: int
    seed: int


@dataclass
class ParityReport:
    side: int
    mode: str
    initial_open: int
    predicted_loser: str  # hero if initial_open is odd, else adversary
    games: int
    matches: int
    parity_switches: int
    optimal_play_loser: Optional[str] = None
    optimal_play_matches: Optional[bool] = None
    optimal_play_switch: Optional[bool] = None

    @property
    def match_fraction(self) -> float:
        return self.matches / self.games if self.games else 0.0

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "mode": self.mode,
            "initial_open": self.initial_open,
            "predicted_loser": self.predicted_loser,
            "games": self.games,
            "matches": self.matches,
            "match_fraction": self.match_fraction,
            "parity_switches": self.parity_switches,
            "optimal_play_loser": self.optimal_play_loser,
            "optimal_play_matches": self.optimal_play_matches,
            "optimal_play_switch": self.optimal_play_switch,
        }


def _final_move_outcome(state: GameState, move: Move) -> tuple[Player, bool]:
    """Loser and parity-switch flag for a game ending with ``move``."""
    n_bad = created_bad_count(state.board, move[0], move[1])
    assert n_bad >= 1
    return state.to_move, n_bad >= 2 and n_bad % 2 == 0


def _nonlosing_moves(state: GameState) -> tuple[list[Move], list[Move]]:
    safe, losing = [], []
    for m in legal_moves(state):
        (losing if created_bad_count(state.board, m[0], m[1]) else safe).append(m)
    return safe, losing


def parity_experiment(side: int, mode: Exhaustive | RandomTrials) -> ParityReport:
    """Play out unrestricted games and score the parity prediction.

    Players never volunteer a losing move; a game ends when the mover has no
    safe move and must create a bad triangle.  The prediction under test: with
    an odd number of initially-open circles the first player loses.
    """
    from .rules import initial_state

    start = initial_state(side, Variant.UNRESTRICTED)
    initial_open = len(start.board.uncolored())
    predicted = Player.HERO if initial_open % 2 == 1 else Player.ADVERSARY

    games = matches = switches = 0

    if isinstance(mode, Exhaustive):
        if side > 3:
            raise ResourceLimit("exhaustive parity experiment limited to side <= 3")

        def walk(state: GameState):
            nonlocal games, matches, switches
            safe, losing = _nonlosing_moves(state)
            if not safe:
                for m in losing:
                    loser, switch = _final_move_outcome(state, m)
                    games += 1
                    matches += loser is predicted
                    switches += switch
                return
            for m in safe:
                walk(apply_move(state, m))

        walk(start)
        mode_name = "exhaustive"
    else:
        rng = random.Random(mode.seed)
        for _ in range(mode.trials):
            state = start
            while True:
                safe, losing = _nonlosing_moves(state)
                if not safe:
                    m = rng.choice(losing)
                    loser, switch = _final_move_outcome(state, m)
                    games += 1
                    matches += loser is predicted
                    switches += switch
                    break
                state = apply_move(state, rng.choice(safe))
        mode_name = f"random(trials={mode.trials}, seed={mode.seed})"

    report = ParityReport(
        side=side,
        mode=mode_name,
        initial_open=initial_open,
        predicted_loser=predicted.value,
        games=games,
        matches=matches,
        parity_switches=switches,
    )

    if side <= 3:  # solvable: add the optimal-play line
        res = solve(start)
        cur = start
        last_state = None
        last_mv = None
        for m in res.principal_variation:
            last_state, last_mv = cur, m
            cur = apply_move(cur, m)
        assert last_state is not None and last_mv is not None
        loser, switch = _final_move_outcome(last_state, last_mv)
        report.optimal_play_loser = loser.value
        report.optimal_play_matches = loser is predicted
        report.optimal_play_switch = switch
    return report
