"""Boundary refinement: move tokens across consecutive segment boundaries to
minimize cross-alignments against the target-side segmentation.

For each interior boundary, the source segment pair is concatenated, word-
aligned against the concatenated target pair, and re-split at the offset
with the fewest links crossing the fixed target split. Boundaries are
processed strictly left to right; each step sees the segment updated by the
previous one, so a document cannot be refined in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .aligners import AlignmentLinkSet, WordAligner
from .errors import DataError
from .textseg import SegmentedText

__all__ = ["BoundaryDecision", "count_cross_alignments", "refine_boundary", "refine_all"]


@dataclass(frozen=True)
class BoundaryDecision:
    boundary_index: int
    old_split: int
    new_split: int
    cross_count_before: int
    cross_count_after: int


def count_cross_alignments(links: AlignmentLinkSet, src_split: int, tgt_split: int) -> int:
    """Number of links whose endpoints fall in opposite partitions."""
    if not (0 <= src_split <= links.src_len):
        raise DataError(f"source split {src_split} out of bounds [0, {links.src_len}]")
    if not (0 <= tgt_split <= links.tgt_len):
        raise DataError(f"target split {tgt_split} out of bounds [0, {links.tgt_len}]")
    count = 0
    for i, j in links.links:
        if (i < src_split) != (j < tgt_split):
            count += 1
    return count


def _best_split(links: AlignmentLinkSet, tgt_split: int, old_split: int) -> tuple[int, int, int]:
    """Pick the source split minimizing cross-alignments.

    Ties prefer minimal movement from the old split, then the smaller
    offset. Returns (new_split, count_before, count_after).
    """
    # Sweep: start at split 0 and update the count incrementally as the
    # split moves right past each source token.
    tgt_left = [0] * (links.src_len + 1)  # links at source index k into the left target part
    tgt_right = [0] * (links.src_len + 1)  # links at source index k into the right target part
    count = 0
    for i, t in links.links:
        if t < tgt_split:
            count += 1  # at split 0 every source token sits right of the split
            tgt_left[i] += 1
        else:
            tgt_right[i] += 1
    best_j, best_count = 0, count
    counts = [count]
    for j in range(1, links.src_len + 1):
        count -= tgt_left[j - 1]
        count += tgt_right[j - 1]
        counts.append(count)
    count_before = counts[old_split]
    for j, c in enumerate(counts):
        if c < best_count or (
            c == best_count and (abs(j - old_split), j) < (abs(best_j - old_split), best_j)
        ):
            best_j, best_count = j, c
    return best_j, count_before, best_count


def refine_boundary(
    s_i: Sequence[str],
    s_next: Sequence[str],
    t_i: Sequence[str],
    t_next: Sequence[str],
    aligner: WordAligner,
    boundary_index: int = 0,
) -> tuple[tuple[str, ...], tuple[str, ...], BoundaryDecision]:
    """Re-split one consecutive source segment pair against its target pair."""
    if not (s_i or s_next or t_i or t_next):
        raise DataError("refine_boundary requires at least one non-empty token list")
    concat_src = tuple(s_i) + tuple(s_next)
    concat_tgt = tuple(t_i) + tuple(t_next)
    links = aligner.align(concat_src, concat_tgt)
    if links.src_len != len(concat_src) or links.tgt_len != len(concat_tgt):
        raise DataError(
            f"aligner returned link set sized {links.src_len}x{links.tgt_len} "
            f"for a {len(concat_src)}x{len(concat_tgt)} pair"
        )
    old_split = len(s_i)
    new_split, before, after = _best_split(links, tgt_split=len(t_i), old_split=old_split)
    decision = BoundaryDecision(
        boundary_index=boundary_index,
        old_split=old_split,
        new_split=new_split,
        cross_count_before=before,
        cross_count_after=after,
    )
    return concat_src[:new_split], concat_src[new_split:], decision


def refine_all(
    src: SegmentedText,
    tgt: SegmentedText,
    aligner: WordAligner,
) -> tuple[SegmentedText, list[BoundaryDecision]]:
    """Refine every interior boundary left to right.

    Each iteration consumes the updated right segment from the previous
    one (sequential by design; see module docstring).
    """
    if src.num_segments != tgt.num_segments:
        raise DataError(
            f"segment count mismatch: source has {src.num_segments}, target has {tgt.num_segments}"
        )
    if src.num_segments == 0:
        raise DataError("refine_all requires at least one segment")
    segments = [tuple(seg) for seg in src.segments]
    decisions: list[BoundaryDecision] = []
    for i in range(len(segments) - 1):
        if not (segments[i] or segments[i + 1] or tgt.segments[i] or tgt.segments[i + 1]):
            decisions.append(BoundaryDecision(i, 0, 0, 0, 0))
            continue
        segments[i], segments[i + 1], decision = refine_boundary(
            segments[i],
            segments[i + 1],
            tgt.segments[i],
            tgt.segments[i + 1],
            aligner,
            boundary_index=i,
        )
        decisions.append(decision)
    return SegmentedText(tuple(segments), lang=src.lang), decisions
