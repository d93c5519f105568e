"""2-D-Brouwer and Flow games with their exhaustive theorem oracles."""

import itertools
import random

import pytest

from sperner.board import Color, IllegalMove
from sperner.grid import (
    BrouwerState,
    GridBoard,
    brouwer_apply,
    brouwer_initial,
    brouwer_legal_moves,
    brouwer_solve,
    brouwer_theorem_check,
    flow_apply,
    flow_from_text,
    flow_initial,
    flow_legal_moves,
    flow_legal_values,
    flow_new,
    flow_solve,
    flow_theorem_check,
    flow_to_text,
    grid_from_text,
    grid_no_draw_check,
    grid_to_text,
    square_is_bad,
    unit_squares,
    brouwer_new,
)
from sperner.rules import Player, Variant
from sperner.solver import SearchLimits, solve_game
from sperner.grid import BROUWER_RULES, FLOW_RULES


@pytest.mark.parametrize("n", [3, 4, 5])
def test_brouwer_theorem(n):
    assert brouwer_theorem_check(n)


def test_brouwer_n3_exhaustive_by_hand():
    # one interior cell: each of the 3 colorings must show a trichromatic square
    for col in (1, 2, 3):
        board = GridBoard(3, bytes([col]))
        assert any(square_is_bad(board, sq) for sq in unit_squares(3))


def test_brouwer_boundary_coloring():
    b = brouwer_new(4)
    assert b.color_at((1, 1)) == Color.FILL  # left wins the corner
    assert b.color_at((1, 3)) == Color.FILL
    assert b.color_at((2, 1)) == Color.SHADE
    assert b.color_at((4, 1)) == Color.SHADE
    assert b.color_at((4, 2)) == Color.BARS
    assert b.color_at((2, 4)) == Color.BARS
    assert b.color_at((2, 2)) is None


def test_brouwer_restricted_adjacency():
    st = brouwer_initial(5, Variant.RESTRICTED)
    st = brouwer_apply(st, ((2, 2), Color.SHADE))  # Bars here would lose at once
    moves = brouwer_legal_moves(st)
    assert {m[0] for m in moves} == {(3, 2), (2, 3), (3, 3)}
    with pytest.raises(IllegalMove):
        brouwer_apply(st, ((4, 4), Color.BARS))


def test_brouwer_no_immediate_loss_on_matching_corner():
    st = brouwer_initial(4, Variant.UNRESTRICTED)
    st = brouwer_apply(st, ((2, 2), Color.SHADE))  # matches bottom boundary colors
    sq = ((1, 1), (2, 1), (1, 2), (2, 2))
    assert not square_is_bad(st.board, sq)


@pytest.mark.parametrize("n", [2, 3])
def test_flow_theorem(n):
    assert flow_theorem_check(n)


def test_flow_corner_forced_zero():
    a = flow_new(2)
    assert flow_legal_values(a, (2, 2)) == {(0, 0)}


def test_flow_boundedness_excludes_outward():
    a = flow_new(3)
    assert (1, 0) not in flow_legal_values(a, (3, 2))  # right edge
    assert (0, 1) not in flow_legal_values(a, (2, 3))  # top edge


def test_flow_direction_preservation():
    st = flow_initial(3, Variant.UNRESTRICTED)
    st = flow_apply(st, (((2, 2)), (1, 0)))
    vals = flow_legal_values(st.assignment, (1, 1))
    assert (0, 1) not in vals  # would differ by L1 distance 2
    assert (0, 0) in vals and (1, 0) in vals


def test_flow_zero_assignment_loses():
    st = flow_initial(3, Variant.UNRESTRICTED)
    vals = flow_legal_values(st.assignment, (2, 2))
    assert vals == {(0, 0), (1, 0), (0, 1)}
    lost = flow_apply(st, ((2, 2), (0, 0)))
    assert lost.loser is Player.HERO


@pytest.mark.parametrize("n", [2, 3])
def test_grid_no_draw(n):
    assert grid_no_draw_check(n)


def test_solver_reuse_matches_brute_force():
    rng = random.Random(7)
    # Brouwer n=3 and Flow n=2: memoized generic solve equals unmemoized.
    for variant in Variant:
        st = brouwer_initial(3, variant)
        a = solve_game(st, BROUWER_RULES, SearchLimits())
        b = solve_game(st, BROUWER_RULES, SearchLimits(use_memo=False))
        assert a.winner == b.winner
        fst = flow_initial(2, variant)
        a = solve_game(fst, FLOW_RULES, SearchLimits())
        b = solve_game(fst, FLOW_RULES, SearchLimits(use_memo=False))
        assert a.winner == b.winner
    # random flow midgames on n=3
    for _ in range(20):
        st = flow_initial(3, rng.choice(list(Variant)))
        for _ in range(rng.randrange(0, 3)):
            moves = [m for m in flow_legal_moves(st) if m[1] != (0, 0)]
            if not moves:
                break
            nxt = flow_apply(st, rng.choice(moves))
            if nxt.loser is not None:
                break
            st = nxt
        if st.loser is not None:
            continue
        a = flow_solve(st)
        b = flow_solve(st, SearchLimits(use_memo=False))
        assert a.winner == b.winner


def test_flow_principal_variation_terminates_at_zero_point():
    st = flow_initial(2, Variant.RESTRICTED)
    res = flow_solve(st)
    cur = st
    for mv in res.principal_variation:
        cur = flow_apply(cur, mv)
    assert cur.loser is res.winner.opponent


def test_grid_text_round_trips():
    b = brouwer_new(5)
    st = brouwer_apply(brouwer_initial(5, Variant.UNRESTRICTED), ((3, 3), Color.FILL))
    for board in (b, st.board):
        text = grid_to_text(board)
        assert grid_from_text(text) == board
        assert grid_to_text(grid_from_text(text)) == text
    a = flow_new(3)
    st2 = flow_apply(flow_initial(3, Variant.UNRESTRICTED), ((2, 2), (1, 0)))
    for asg in (a, st2.assignment):
        text = flow_to_text(asg)
        assert flow_from_text(text) == asg
        assert flow_to_text(flow_from_text(text)) == text
