"""Move legality, loss detection, islands and the reconstruction oracle."""

import random

import pytest

from sperner.board import Color, IllegalMove, InvalidState, ResourceLimit, color_circle, new_board
from sperner.rules import (
    GameState,
    Player,
    Variant,
    apply_move,
    initial_state,
    is_plausibly_legal_state,
    island_is_anchored,
    islands,
    legal_moves,
    reconstruct_play_sequence,
    state_from_text,
    state_to_text,
)


def hexagon_state(last_at_center=True):
    b = new_board(5)
    ring = [(2, 0), (1, 0), (1, 1), (2, 2), (3, 2), (3, 1)]
    for c in ring:
        b, _ = color_circle(b, c, Color.FILL)
    b, created = color_circle(b, (2, 1), Color.FILL)
    assert not created
    return GameState(b, Variant.RESTRICTED, Player.ADVERSARY, (2, 1) if last_at_center else None)


def test_initial_moves_all_cells_times_three():
    st = initial_state(4, Variant.RESTRICTED)
    assert len(legal_moves(st)) == 10 * 3


def test_restriction_two_uncolored_neighbors():
    st = initial_state(3, Variant.RESTRICTED)
    st = apply_move(st, ((1, 0), Color.FILL))
    st = apply_move(st, ((0, 0), Color.FILL))
    st = apply_move(st, ((1, 1), Color.FILL))
    # last move (1,1): uncolored neighbors are (2,1) and (2,2)
    moves = legal_moves(st)
    assert len(moves) == 6
    assert {m[0] for m in moves} == {(2, 1), (2, 2)}


def test_jump_when_surrounded():
    st = hexagon_state()
    st = GameState(st.board, st.variant, Player.HERO, (2, 1))
    moves = legal_moves(st)
    assert {m[0] for m in moves} == set(st.board.uncolored())


def test_unrestricted_never_restricts():
    st = initial_state(3, Variant.UNRESTRICTED)
    st = apply_move(st, ((1, 0), Color.FILL))
    assert {m[0] for m in legal_moves(st)} == set(st.board.uncolored())


def test_doomed_cells_are_legal():
    st = initial_state(1, Variant.RESTRICTED)
    moves = legal_moves(st)
    assert len(moves) == 3  # the lone cell is doomed yet playable
    final = apply_move(st, moves[0])
    assert final.loser is Player.HERO


def test_forbidden_color_next_to_boundary_loses():
    st = initial_state(3, Variant.RESTRICTED)
    after = apply_move(st, ((2, 0), Color.FILL))  # bottom edge forbids Fill
    assert after.loser is Player.HERO


def test_first_move_on_empty_board_safe_inside():
    st = initial_state(5, Variant.RESTRICTED)
    after = apply_move(st, ((2, 1), Color.BARS))  # interior cell: no triangle complete
    assert after.loser is None and after.to_move is Player.ADVERSARY


def test_completing_trichromatic_triangle_loses():
    st = initial_state(5, Variant.UNRESTRICTED)  # interior triangle (2,1),(3,1),(3,2)
    st = apply_move(st, ((2, 1), Color.BARS))
    st = apply_move(st, ((3, 1), Color.SHADE))
    st = apply_move(st, ((3, 2), Color.FILL))
    assert st.loser is Player.HERO


def test_apply_move_error_reasons():
    st = initial_state(3, Variant.RESTRICTED)
    st = apply_move(st, ((0, 0), Color.FILL))
    with pytest.raises(IllegalMove) as e:
        apply_move(st, ((0, 0), Color.BARS))
    assert e.value.reason == "already-colored"
    with pytest.raises(IllegalMove) as e:
        apply_move(st, ((2, 1), Color.BARS))  # not adjacent to (0,0)
    assert e.value.reason == "not-adjacent-when-required"
    final = apply_move(st, ((1, 0), Color.SHADE))
    final = apply_move(final, ((1, 1), Color.BARS))
    assert final.loser is not None
    with pytest.raises(InvalidState):
        legal_moves(final)


def test_move_changes_exactly_one_cell():
    rng = random.Random(11)
    st = initial_state(4, Variant.RESTRICTED)
    while st.ongoing:
        before = st.board.cells
        mv = rng.choice(legal_moves(st))
        st = apply_move(st, mv)
        diff = [k for k in range(len(before)) if before[k] != st.board.cells[k]]
        assert len(diff) == 1


def test_islands_partition():
    b = new_board(5)
    assert islands(b) == []
    b, _ = color_circle(b, (0, 0), Color.FILL)
    b, _ = color_circle(b, (4, 4), Color.BARS)
    isls = islands(b)
    assert len(isls) == 2
    assert {frozenset(i.cells) for i in isls} == {frozenset({(0, 0)}), frozenset({(4, 4)})}


def test_hexagon_is_one_anchored_island():
    st = hexagon_state()
    isls = islands(st.board)
    assert len(isls) == 1 and len(isls[0].cells) == 7
    assert island_is_anchored(st.board, isls[0], None)  # center surrounded


def test_isolated_cell_anchoring_depends_on_last_move():
    b, _ = color_circle(new_board(5), (2, 1), Color.FILL)
    isl = islands(b)[0]
    assert island_is_anchored(b, isl, (2, 1))
    assert not island_is_anchored(b, isl, None)


def test_two_unanchored_islands_rejected():
    b = new_board(5)
    b, _ = color_circle(b, (0, 0), Color.FILL)
    b, _ = color_circle(b, (4, 2), Color.BARS)
    st = GameState(b, Variant.RESTRICTED, Player.HERO, (4, 2))
    assert not is_plausibly_legal_state(st)
    assert reconstruct_play_sequence(st) is None


def test_empty_initial_state_is_plausible():
    assert is_plausibly_legal_state(initial_state(4, Variant.RESTRICTED))


def test_hexagon_reconstruction():
    st = hexagon_state()
    seq = reconstruct_play_sequence(st)
    assert seq is not None and len(seq) == 7 and seq[-1][0] == (2, 1)
    replay = initial_state(5, Variant.RESTRICTED)
    for mv in seq:
        assert mv in legal_moves(replay)
        replay = apply_move(replay, mv)
    assert replay.board.cells == st.board.cells


def test_single_cell_reconstruction():
    b, _ = color_circle(new_board(4), (2, 1), Color.SHADE)
    st = GameState(b, Variant.RESTRICTED, Player.ADVERSARY, (2, 1))
    assert reconstruct_play_sequence(st) == [((2, 1), Color.SHADE)]


def test_reconstruction_budget():
    st = hexagon_state()
    with pytest.raises(ResourceLimit):
        reconstruct_play_sequence(st, budget=3)


@pytest.mark.parametrize("variant", list(Variant))
def test_random_self_play_states_plausible_and_reconstructible(variant):
    rng = random.Random(5)
    reconstructed = 0
    for _ in range(150):
        st = initial_state(rng.choice([3, 4]), variant)
        for _ in range(rng.randrange(1, 9)):
            nxt = apply_move(st, rng.choice(legal_moves(st)))
            st = nxt
            if not st.ongoing:
                break
        if not st.board.colored():
            continue
        assert is_plausibly_legal_state(st)
        if st.ongoing and len(st.board.colored()) <= 12:
            seq = reconstruct_play_sequence(st)
            assert seq is not None
            replay = initial_state(st.board.side, variant)
            for mv in seq:
                assert mv in legal_moves(replay)
                replay = apply_move(replay, mv)
            assert replay.board.cells == st.board.cells
            assert replay.last_move == st.last_move
            reconstructed += 1
    assert reconstructed > 20


@pytest.mark.parametrize("side", [1, 2, 3])
@pytest.mark.parametrize("variant", list(Variant))
def test_no_draws_exhaustive(side, variant):
    """Every maximal legal sequence ends with a loss, never a full bad-free board."""
    seen = set()

    def walk(state):
        key = (state.board.cells, state.last_move)
        if key in seen:
            return
        seen.add(key)
        assert not state.board.is_complete(), "complete coloring reached without a loss"
        for mv in legal_moves(state):
            child = apply_move(state, mv)
            if child.ongoing:
                walk(child)

    walk(initial_state(side, variant))


def test_restriction_soundness_random():
    rng = random.Random(9)
    for _ in range(100):
        st = initial_state(4, Variant.RESTRICTED)
        while st.ongoing:
            moves = legal_moves(st)
            cells = {m[0] for m in moves}
            if st.last_move is not None and cells != set(st.board.uncolored()):
                from sperner.board import neighbors

                assert cells <= neighbors(st.board, st.last_move)
            st = apply_move(st, rng.choice(moves))


def test_state_text_round_trip():
    st = initial_state(4, Variant.UNRESTRICTED)
    st = apply_move(st, ((2, 1), Color.FILL))
    text = state_to_text(st)
    assert state_from_text(text) == st
    assert state_to_text(state_from_text(text)) == text
    lost = apply_move(st, ((2, 0), Color.BARS))  # left edge forbids Bars
    assert lost.loser is not None
    assert state_from_text(state_to_text(lost)) == lost
