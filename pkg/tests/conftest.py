"""Shared test helpers: independent oracles and fixture aligners/embedders.

The oracles deliberately avoid the library's DP/backtrace code paths so they
can vouch for it.
"""

from __future__ import annotations

import itertools
import zlib
from typing import Sequence

import numpy as np

from resegeval.aligners import AlignmentLinkSet
from resegeval.textseg import SegmentedText


def oracle_levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Plain two-row unit-cost edit distance, no backtrace."""
    prev = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        cur = [i]
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def oracle_best_segmentation(hyp: Sequence[str], ref_segments: Sequence[Sequence[str]]) -> int:
    """Brute-force minimum over all ways to split hyp into len(ref_segments) parts."""
    n_seg = len(ref_segments)
    m = len(hyp)
    best = None
    for cuts in itertools.combinations_with_replacement(range(m + 1), n_seg - 1):
        bounds = (0,) + cuts + (m,)
        total = 0
        for k in range(n_seg):
            total += oracle_levenshtein(ref_segments[k], hyp[bounds[k] : bounds[k + 1]])
        if best is None or total < best:
            best = total
    return best


def oracle_cross_count(links, src_split: int, tgt_split: int) -> int:
    """Direct transcription of the cross-alignment definition."""
    return sum(
        1
        for i, j in links
        if (i < src_split and j >= tgt_split) or (i >= src_split and j < tgt_split)
    )


def oracle_min_cross(links, src_len: int, tgt_split: int) -> int:
    return min(oracle_cross_count(links, j, tgt_split) for j in range(src_len + 1))


def oracle_pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Closed-form Pearson from raw sums, independent of the library formula."""
    n = len(x)
    sx, sy = sum(x), sum(y)
    sxx = sum(v * v for v in x)
    syy = sum(v * v for v in y)
    sxy = sum(a * b for a, b in zip(x, y))
    num = n * sxy - sx * sy
    den = ((n * sxx - sx * sx) ** 0.5) * ((n * syy - sy * sy) ** 0.5)
    return num / den


# Reference fixture for the two-stage pipeline: two unaligned words sit on
# the segment border of the source stream, have no counterpart near the
# boundary of the back-translation (their equivalent appears mid-segment),
# and are tied to the second target segment by the word alignments.
BOUNDARY_FIXTURE = {
    "asr_stream": (
        "but", "we", "do", "not", "speak", "for", "europe", ".",
        "are", "not", "the", "crises", "we", "are", "facing", "european", "?",
    ),
    "bt": SegmentedText.from_token_lists(
        [
            ["but", "we", "do", "not", "speak", "for", "europe", "."],
            ["the", "crises", "we", "are", "facing", ",", "are", "they", "not", "european", "?"],
        ],
        lang="en",
    ),
    "ref_translation": SegmentedText.from_token_lists(
        [
            ["ma", "noi", "non", "parliamo", "a", "nome", "dell'", "europa", "."],
            ["le", "crisi", "che", "stiamo", "affrontando", "non", "sono", "forse", "europee", "?"],
        ],
        lang="it",
    ),
    # word alignments over the concatenated pair: the two boundary words
    # link into the second target segment, all other links stay within
    # their own half
    "links": {
        (0, 0), (1, 1), (3, 2), (4, 3), (6, 7), (7, 8),
        (8, 15), (9, 14),
        (10, 9), (11, 10), (13, 12), (14, 13), (15, 17), (16, 18),
    },
    "boundary_words": ("are", "not"),
}


class FixtureAligner:
    """Word aligner returning canned links keyed by the source concatenation."""

    def __init__(self, table: dict[tuple[str, ...], set[tuple[int, int]]]):
        self.table = table

    def align(self, src_tokens, tgt_tokens) -> AlignmentLinkSet:
        links = self.table[tuple(src_tokens)]
        return AlignmentLinkSet.from_pairs(links, len(src_tokens), len(tgt_tokens))


class DiagonalAligner:
    """Links equal tokens at equal positions; a cheap identity-friendly aligner."""

    def align(self, src_tokens, tgt_tokens) -> AlignmentLinkSet:
        pairs = {
            (k, k)
            for k in range(min(len(src_tokens), len(tgt_tokens)))
            if src_tokens[k] == tgt_tokens[k]
        }
        return AlignmentLinkSet.from_pairs(pairs, len(src_tokens), len(tgt_tokens))


class HashEmbedder:
    """Deterministic embedding provider for offline tests."""

    dimension = 16

    def embed(self, tokens) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float64)
        for tok in tokens:
            rng = np.random.default_rng(zlib.crc32(tok.encode("utf-8")))
            vec += rng.standard_normal(self.dimension)
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec + 1.0 / self.dimension
