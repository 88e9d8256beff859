"""Mutual-argmax word alignment and sentence embeddings over token encoders."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .encoders import TokenEncoder


def mutual_argmax_align(
    src_tokens: Sequence[str],
    tgt_tokens: Sequence[str],
    encoder: TokenEncoder,
) -> list[tuple[int, int]]:
    """Link (i, j) iff j is the best target for i AND i is the best source for j.

    One-to-one by construction; may be empty when the two argmax directions
    never agree.
    """
    if not src_tokens or not tgt_tokens:
        raise ValueError("mutual_argmax_align requires non-empty token lists")
    src_vecs = encoder.encode(src_tokens)
    tgt_vecs = encoder.encode(tgt_tokens)
    sim = src_vecs @ tgt_vecs.T
    best_tgt = sim.argmax(axis=1)
    best_src = sim.argmax(axis=0)
    links = [
        (i, int(best_tgt[i]))
        for i in range(len(src_tokens))
        if int(best_src[best_tgt[i]]) == i
    ]
    return sorted(links)


def sentence_embedding(tokens: Sequence[str], encoder: TokenEncoder) -> np.ndarray:
    """Mean of the token vectors, unit-normalized; zeros for an empty sentence."""
    if not tokens:
        return np.zeros(encoder.dimension)
    mean = encoder.encode(tokens).mean(axis=0)
    norm = np.linalg.norm(mean)
    return mean / norm if norm > 0 else mean


def validate_links(links, src_len: int, tgt_len: int) -> None:
    """Reject malformed or out-of-bounds links and one-to-many mappings."""
    seen_src: set[int] = set()
    seen_tgt: set[int] = set()
    for link in links:
        if len(link) != 2:
            raise ValueError(f"malformed link: {link!r}")
        i, j = link
        if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
            raise ValueError(f"malformed link: {link!r}")
        if not (0 <= i < src_len and 0 <= j < tgt_len):
            raise ValueError(
                f"link ({i},{j}) out of bounds for {src_len} source / {tgt_len} target tokens"
            )
        if i in seen_src or j in seen_tgt:
            raise ValueError(f"link ({i},{j}) breaks the one-to-one property")
        seen_src.add(int(i))
        seen_tgt.add(int(j))
