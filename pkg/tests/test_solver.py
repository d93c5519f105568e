"""Exact solver, punishment search, parity experiment, no-draw oracle."""

import random

import pytest

from sperner.board import Color, InvalidArgument, ResourceLimit, color_circle, created_bad_count, new_board
from sperner.rules import GameState, Player, Variant, apply_move, initial_state, legal_moves
from sperner.solver import (
    BestMove,
    Exhaustive,
    RandomTrials,
    SearchLimits,
    best_move,
    parity_experiment,
    punishment_strategy,
    solve,
    verify_no_draw,
    verify_punishment,
)


def random_state(rng, max_plies=5):
    """A random ongoing mid-game state on a small board."""
    while True:
        st = initial_state(rng.choice([2, 3]), rng.choice(list(Variant)))
        for _ in range(rng.randrange(0, max_plies)):
            nxt = apply_move(st, rng.choice(legal_moves(st)))
            if not nxt.ongoing:
                break
            st = nxt
        if st.ongoing:
            return st


def test_all_moves_doomed_mover_loses():
    st = initial_state(1, Variant.RESTRICTED)
    res = solve(st)
    assert res.winner is Player.ADVERSARY
    assert res.proof_depth == 1


def test_side2_exhaustive_matches_negamax_oracle():
    """Frozen expectation computed by the unmemoized brute-force oracle."""
    for variant in Variant:
        st = initial_state(2, variant)
        brute = solve(st, SearchLimits(use_memo=False))
        memo = solve(st)
        assert brute.winner == memo.winner == Player.ADVERSARY


def test_memoized_equals_brute_force_on_200_random_states():
    rng = random.Random(17)
    for _ in range(200):
        st = random_state(rng)
        a = solve(st, SearchLimits())
        b = solve(st, SearchLimits(use_memo=False))
        assert a.winner == b.winner


def test_principal_variation_reaches_consistent_terminal():
    rng = random.Random(23)
    for _ in range(40):
        st = random_state(rng)
        res = solve(st)
        cur = st
        for mv in res.principal_variation:
            assert mv in legal_moves(cur)
            cur = apply_move(cur, mv)
        assert cur.loser is not None
        assert cur.loser is res.winner.opponent
        # final move creates the bad triangle, i.e. its mover is the loser
        assert cur.to_move is res.winner.opponent.opponent


def test_determinism():
    st = initial_state(3, Variant.RESTRICTED)
    r1, r2 = solve(st), solve(st)
    assert r1.principal_variation == r2.principal_variation
    assert r1.nodes_visited == r2.nodes_visited


def test_zugzwang_states_exist():
    """Positions where the mover loses exist on each small board."""
    for side in (2, 3):
        st = initial_state(side, Variant.RESTRICTED)
        found = solve(st).winner is Player.ADVERSARY
        if not found:
            rng = random.Random(side)
            for _ in range(200):
                s = random_state(rng)
                if s.board.side == side and solve(s).winner is s.to_move.opponent:
                    found = True
                    break
        assert found


def test_resource_limit_reports_nodes():
    st = initial_state(3, Variant.UNRESTRICTED)
    with pytest.raises(ResourceLimit) as e:
        solve(st, SearchLimits(max_nodes=5))
    assert e.value.nodes_visited >= 5


def test_best_move_unique_safe_cell():
    # Build a position with exactly one non-doomed cell left.
    st = initial_state(2, Variant.UNRESTRICTED)
    st = apply_move(st, ((1, 0), Color.SHADE))
    bm = best_move(st)
    assert not bm.resigned
    after = apply_move(st, (bm.coord, bm.color))
    assert after.loser is None


def test_best_move_preserves_win():
    rng = random.Random(31)
    checked = 0
    for _ in range(80):
        st = random_state(rng)
        res = solve(st)
        if res.winner is not st.to_move:
            continue
        bm = best_move(st)
        assert bm.solved and bm.winner is st.to_move
        after = apply_move(st, (bm.coord, bm.color))
        assert after.loser is None or after.loser is st.to_move.opponent
        if after.ongoing:
            assert solve(after).winner is st.to_move
        checked += 1
    assert checked > 10


def test_best_move_resigns_when_everything_loses():
    st = initial_state(1, Variant.RESTRICTED)
    bm = best_move(st)
    assert bm.resigned


def test_best_move_heuristic_avoids_suicide():
    rng = random.Random(37)
    for _ in range(30):
        st = random_state(rng)
        bm = best_move(st, SearchLimits(max_nodes=1))
        safe_exists = any(
            created_bad_count(st.board, m[0], m[1]) == 0 for m in legal_moves(st)
        )
        if safe_exists:
            assert created_bad_count(st.board, bm.coord, bm.color) == 0


def test_verify_punishment_immediate_self_loss():
    st = initial_state(3, Variant.RESTRICTED)
    dev = ((2, 0), Color.FILL)  # bottom edge forbids Fill: loses instantly
    assert verify_punishment(st, set(), dev, 1)


def test_verify_punishment_rejects_bad_plies():
    st = initial_state(3, Variant.RESTRICTED)
    with pytest.raises(InvalidArgument):
        verify_punishment(st, set(), ((0, 0), Color.FILL), 0)


def test_verify_punishment_safe_deviation_is_not_punished():
    # A perfectly safe opening move on a large board cannot be refuted quickly.
    st = initial_state(5, Variant.RESTRICTED)
    region = {(r, i) for r in range(5) for i in range(r + 1)}
    assert not verify_punishment(st, region, ((2, 1), Color.FILL), 3)


def test_punishment_strategy_replay_soundness():
    """Whenever the search says 'punished', replaying its strategy wins."""
    rng = random.Random(41)
    confirmed = 0
    for _ in range(300):
        st = random_state(rng)
        moves = legal_moves(st)
        dev = rng.choice(moves)
        region = {c for c in st.board.geometry.playable}
        ok, strategy = punishment_strategy(st, region, dev, 4)
        if not ok:
            continue
        confirmed += 1
        after = apply_move(st, dev)
        if after.loser is not None:
            continue

        def exhaust(s, depth=0):
            assert depth < 20
            key = (s.board.cells, s.last_move)
            assert key in strategy, "strategy table missing a reachable state"
            s2 = apply_move(s, strategy[key])
            assert s2.loser is None, "punisher strategy suicided"
            for reply in legal_moves(s2):
                s3 = apply_move(s2, reply)
                if s3.loser is not None:
                    continue
                exhaust(s3, depth + 1)

        exhaust(after)
    assert confirmed > 5


@pytest.mark.parametrize("side", [1, 2, 3])
def test_verify_no_draw(side):
    assert verify_no_draw(side)


def test_parity_experiment_exhaustive_side2():
    r = parity_experiment(2, Exhaustive())
    assert r.games > 0
    assert 0.0 <= r.match_fraction <= 1.0
    assert r.predicted_loser == "hero"  # 3 initial circles: odd
    r2 = parity_experiment(2, Exhaustive())
    assert r.to_dict() == r2.to_dict()


def test_parity_experiment_random_deterministic():
    a = parity_experiment(3, RandomTrials(500, 99))
    b = parity_experiment(3, RandomTrials(500, 99))
    assert a.to_dict() == b.to_dict()
    assert a.games == 500
    c = parity_experiment(3, RandomTrials(500, 100))
    assert c.games == 500  # different seed still runs fine


def test_parity_experiment_side1_direct():
    r = parity_experiment(1, Exhaustive())
    # single doomed cell: first player must play it and lose; 3 color choices
    assert r.games == 3 and r.matches == 3
    assert r.optimal_play_loser == "hero"


def test_parity_switch_detection():
    """A terminal whose losing move makes 2 bad triangles counts as a switch."""
    from sperner.solver import _final_move_outcome
    from sperner.board import _geometry
    import itertools

    found = False
    g = _geometry(3)
    for cells in itertools.combinations(range(g.count), 4):
        for colors in itertools.product((1, 2, 3), repeat=4):
            buf = bytearray(g.count)
            for j, col in zip(cells, colors):
                buf[j] = col
            from sperner.board import Board, bad_triangles

            board = Board(3, bytes(buf))
            if bad_triangles(board):
                continue
            for c in board.uncolored():
                for col in Color:
                    if created_bad_count(board, c, col) == 2:
                        st = GameState(board, Variant.UNRESTRICTED, Player.HERO, None)
                        loser, switch = _final_move_outcome(st, (c, col))
                        assert switch and loser is Player.HERO
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if found:
            break
    assert found
