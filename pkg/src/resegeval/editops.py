"""Word-level Levenshtein alignment, WER and cosine similarity.

The alignment uses unit costs for substitutions, insertions and deletions.
Backtraces are made deterministic by preferring, at equal cost, a diagonal
move (match/substitute) over a deletion, and a deletion over an insertion;
the segmenter's boundary behavior depends on this order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .textseg import SegmentedText

__all__ = [
    "EditOpKind",
    "EditOp",
    "EditSummary",
    "edit_align",
    "replay",
    "corpus_wer",
    "cosine",
    "doc_similarity",
]

# Move codes stored in the DP backtrace matrix.
_NONE, _MATCH, _SUB, _DEL, _INS = 0, 1, 2, 3, 4


class EditOpKind(enum.Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    INSERT = "insert"
    DELETE = "delete"


@dataclass(frozen=True)
class EditOp:
    """One alignment step; indices refer to the original token lists.

    MATCH/SUBSTITUTE carry both indices, INSERT only a hypothesis index,
    DELETE only a reference index.
    """

    kind: EditOpKind
    ref_index: int | None
    hyp_index: int | None


@dataclass(frozen=True)
class EditSummary:
    substitutions: int
    insertions: int
    deletions: int
    correct: int

    @property
    def ref_len(self) -> int:
        return self.substitutions + self.deletions + self.correct

    @property
    def cost(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    def wer(self) -> float:
        if self.ref_len == 0:
            raise DataError("WER undefined for empty reference")
        return self.cost / self.ref_len


def _dp_moves(ref: Sequence[str], hyp: Sequence[str]) -> tuple[int, np.ndarray]:
    """Levenshtein DP over (ref position, hyp position).

    Returns (distance, moves) where moves[j, i] encodes the preferred move
    into cell (j, i): diagonal > delete > insert at ties.
    """
    n, m = len(ref), len(hyp)
    moves = np.zeros((n + 1, m + 1), dtype=np.uint8)
    moves[0, 1:] = _INS
    moves[1:, 0] = _DEL

    hyp_arr = np.array(hyp, dtype=object) if m else np.empty(0, dtype=object)
    prev = np.arange(m + 1, dtype=np.int64)
    col_idx = np.arange(m + 1, dtype=np.int64)
    for j in range(1, n + 1):
        sub_cost = (hyp_arr != ref[j - 1]).astype(np.int64) if m else np.empty(0, dtype=np.int64)
        diag = prev[:-1] + sub_cost
        best = np.empty(m + 1, dtype=np.int64)
        best[0] = prev[0] + 1
        if m:
            np.minimum(diag, prev[1:] + 1, out=best[1:])
        # fold in insertions: cur[i] = min_k<=i best[k] + (i - k)
        cur = np.minimum.accumulate(best - col_idx) + col_idx
        row_moves = np.full(m + 1, _INS, dtype=np.uint8)
        row_moves[cur == prev + 1] = _DEL
        if m:
            diag_hit = cur[1:] == diag
            row_moves[1:][diag_hit & (sub_cost == 1)] = _SUB
            row_moves[1:][diag_hit & (sub_cost == 0)] = _MATCH
        row_moves[0] = _DEL
        moves[j] = row_moves
        prev = cur
    return int(prev[m]), moves


def _backtrace(moves: np.ndarray) -> list[EditOp]:
    ops: list[EditOp] = []
    j, i = moves.shape[0] - 1, moves.shape[1] - 1
    while j > 0 or i > 0:
        mv = moves[j, i]
        if mv == _MATCH:
            ops.append(EditOp(EditOpKind.MATCH, j - 1, i - 1))
            j, i = j - 1, i - 1
        elif mv == _SUB:
            ops.append(EditOp(EditOpKind.SUBSTITUTE, j - 1, i - 1))
            j, i = j - 1, i - 1
        elif mv == _DEL:
            ops.append(EditOp(EditOpKind.DELETE, j - 1, None))
            j -= 1
        else:
            ops.append(EditOp(EditOpKind.INSERT, None, i - 1))
            i -= 1
    ops.reverse()
    return ops


def edit_align(ref_tokens: Sequence[str], hyp_tokens: Sequence[str]) -> tuple[EditSummary, list[EditOp]]:
    """Minimal-cost word alignment of hypothesis against reference."""
    _, moves = _dp_moves(ref_tokens, hyp_tokens)
    script = _backtrace(moves)
    counts = {k: 0 for k in EditOpKind}
    for op in script:
        counts[op.kind] += 1
    summary = EditSummary(
        substitutions=counts[EditOpKind.SUBSTITUTE],
        insertions=counts[EditOpKind.INSERT],
        deletions=counts[EditOpKind.DELETE],
        correct=counts[EditOpKind.MATCH],
    )
    return summary, script


def replay(script: Sequence[EditOp], ref_tokens: Sequence[str], hyp_tokens: Sequence[str]) -> list[str]:
    """Apply an edit script to the reference; yields the hypothesis."""
    out: list[str] = []
    for op in script:
        if op.kind is EditOpKind.MATCH:
            out.append(ref_tokens[op.ref_index])
        elif op.kind in (EditOpKind.SUBSTITUTE, EditOpKind.INSERT):
            out.append(hyp_tokens[op.hyp_index])
        # DELETE drops the reference token
    return out


def corpus_wer(ref: SegmentedText, hyp: SegmentedText) -> float:
    """Micro-averaged WER: total edit cost over total reference length."""
    if ref.num_segments != hyp.num_segments:
        raise DataError(
            f"segment count mismatch: reference has {ref.num_segments}, hypothesis has {hyp.num_segments}"
        )
    total_cost = 0
    total_ref = 0
    for rseg, hseg in zip(ref.segments, hyp.segments):
        cost, _ = _dp_moves(rseg, hseg)
        total_cost += cost
        total_ref += len(rseg)
    if total_ref == 0:
        raise DataError("WER undefined: total reference length is zero")
    return total_cost / total_ref


def cosine(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise DataError(f"cosine: dimension mismatch ({u.shape} vs {v.shape})")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise DataError("cosine undefined for zero-norm vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def doc_similarity(src: SegmentedText, tgt: SegmentedText, embedder) -> float:
    """Mean per-segment cosine similarity of sentence embeddings.

    Empty-vs-empty segment pairs count as 1.0, empty-vs-nonempty as 0.0,
    so degenerate documents never abort a scoring run.
    """
    from .errors import ServiceError

    if src.num_segments != tgt.num_segments:
        raise DataError(
            f"segment count mismatch: {src.num_segments} vs {tgt.num_segments}"
        )
    if src.num_segments == 0:
        raise DataError("doc_similarity undefined for empty documents")
    sims: list[float] = []
    for idx, (sseg, tseg) in enumerate(zip(src.segments, tgt.segments)):
        if not sseg and not tseg:
            sims.append(1.0)
            continue
        if not sseg or not tseg:
            sims.append(0.0)
            continue
        try:
            eu = embedder.embed(sseg)
            ev = embedder.embed(tseg)
        except Exception as exc:
            raise ServiceError(f"embedding provider failed on segment {idx}: {exc}") from exc
        sims.append(cosine(eu, ev))
    return float(np.mean(sims))
