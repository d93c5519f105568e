"""Sperner: a triangle-coloring game engine, exact solver and TQBF reduction compiler."""

from .board import (
    Board,
    Color,
    Coord,
    IllegalMove,
    InvalidArgument,
    InvalidState,
    ParseError,
    PreconditionViolation,
    ResourceLimit,
    SpernerError,
    UnitTriangle,
    board_from_text,
    board_to_text,
    color_circle,
    count_trichromatic,
    doomed_circles,
    is_bad_triangle,
    neighbors,
    new_board,
    unit_triangles,
)

__all__ = [
    "Board",
    "Color",
    "Coord",
    "IllegalMove",
    "InvalidArgument",
    "InvalidState",
    "ParseError",
    "PreconditionViolation",
    "ResourceLimit",
    "SpernerError",
    "UnitTriangle",
    "board_from_text",
    "board_to_text",
    "color_circle",
    "count_trichromatic",
    "doomed_circles",
    "is_bad_triangle",
    "neighbors",
    "new_board",
    "unit_triangles",
]
