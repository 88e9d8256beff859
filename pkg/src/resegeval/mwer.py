"""Minimum-WER re-segmentation of a hypothesis stream against a segmented reference.

A single dynamic program over (flattened reference position, hypothesis
position) finds an optimal global alignment; hypothesis boundaries are read
off the backtrace at reference segment ends. Unaligned hypothesis words
sitting exactly on a boundary attach to the left segment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .editops import _DEL, _INS, _MATCH, _SUB, _dp_moves
from .errors import DataError
from .textseg import SegmentedText

__all__ = ["SegmentationResult", "mwer_segment"]


@dataclass(frozen=True)
class SegmentationResult:
    resegmented: SegmentedText
    total_cost: int
    boundary_positions: tuple[int, ...]


def mwer_segment(hyp_stream: Sequence[str], ref: SegmentedText) -> SegmentationResult:
    """Split ``hyp_stream`` into ``ref.num_segments`` parts with minimal total edit distance.

    The sum of per-segment Levenshtein distances is globally minimal and
    equals the Levenshtein distance between the flattened streams.
    """
    n_seg = ref.num_segments
    if n_seg == 0:
        raise DataError("mwer_segment requires a reference with at least one segment")

    flat_ref = ref.flatten()
    cost, moves = _dp_moves(flat_ref, hyp_stream)

    # Reference row index at the end of each segment but the last.
    boundary_rows: list[int] = []
    acc = 0
    for seg in ref.segments[:-1]:
        acc += len(seg)
        boundary_rows.append(acc)

    # Walk the backtrace; the first time a row is reached (coming from the
    # end) the column is maximal for that row, which attaches boundary
    # insertions to the left segment.
    max_col: dict[int, int] = {}
    j, i = len(flat_ref), len(hyp_stream)
    max_col[j] = i
    while j > 0 or i > 0:
        mv = moves[j, i]
        if mv == _MATCH or mv == _SUB:
            j, i = j - 1, i - 1
        elif mv == _DEL:
            j -= 1
        elif mv == _INS:
            i -= 1
        else:
            raise AssertionError("backtrace hit an unset cell")
        if j not in max_col:
            max_col[j] = i

    boundaries = tuple(max_col[row] for row in boundary_rows)
    pieces = []
    start = 0
    for b in boundaries:
        pieces.append(tuple(hyp_stream[start:b]))
        start = b
    pieces.append(tuple(hyp_stream[start:]))
    resegmented = SegmentedText(tuple(pieces), lang=ref.lang)
    return SegmentationResult(resegmented=resegmented, total_cost=cost, boundary_positions=boundaries)
