"""Tokenization, Unicode normalization and the segmented-text data model.

A document is an ordered list of segments; a segment is an ordered list of
tokens. Re-segmentation operations rearrange segment boundaries but never
touch the underlying token stream, so everything downstream can rely on
``flatten()`` being invariant.
"""

from __future__ import annotations

import enum
import os
import tempfile
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

__all__ = [
    "NormalizationMode",
    "SegmentedText",
    "tokenize",
    "read_segmented",
    "read_stream",
    "write_segmented",
]


class NormalizationMode(enum.Enum):
    """Text normalization applied before scoring or alignment.

    NP: case-folded, punctuation dropped ("no punctuation").
    WP: case-folded, punctuation kept as standalone tokens ("with punctuation").
    """

    NP = "np"
    WP = "wp"

    @classmethod
    def from_str(cls, value: str) -> "NormalizationMode":
        try:
            return cls(value.lower())
        except ValueError:
            raise DataError(f"unknown normalization mode: {value!r} (expected 'np' or 'wp')") from None


def _is_punct(ch: str) -> bool:
    # Punctuation for tokenization purposes: Unicode P* plus symbols S*.
    return unicodedata.category(ch)[0] in ("P", "S")


def _split_punct_runs(chunk: str) -> Iterable[tuple[str, bool]]:
    """Yield (run, is_punct) for maximal same-class runs inside a chunk."""
    start = 0
    cur = _is_punct(chunk[0])
    for i in range(1, len(chunk)):
        nxt = _is_punct(chunk[i])
        if nxt != cur:
            yield chunk[start:i], cur
            start, cur = i, nxt
    yield chunk[start:], cur


def tokenize(text: str, mode: NormalizationMode, char_level: bool = False) -> list[str]:
    """Normalize and split raw text into tokens.

    Applies NFC and full Unicode case folding, then splits on whitespace.
    In WP mode maximal punctuation runs become standalone tokens; in NP mode
    they act as separators and are dropped. With ``char_level`` every
    non-space character is its own token (punctuation still per mode).
    """
    text = unicodedata.normalize("NFC", text).casefold()
    if char_level:
        chars = [c for c in text if not c.isspace()]
        if mode is NormalizationMode.NP:
            chars = [c for c in chars if not _is_punct(c)]
        return chars
    tokens: list[str] = []
    for chunk in text.split():
        for run, is_punct in _split_punct_runs(chunk):
            if is_punct and mode is NormalizationMode.NP:
                continue
            tokens.append(run)
    return tokens


@dataclass(frozen=True)
class SegmentedText:
    """An ordered list of token segments in one language.

    Segments may be empty; tokens are non-empty strings without whitespace.
    """

    segments: tuple[tuple[str, ...], ...]
    lang: str = ""

    def __post_init__(self) -> None:
        for si, seg in enumerate(self.segments):
            for tok in seg:
                if not tok or any(c.isspace() for c in tok):
                    raise DataError(
                        f"segment {si}: invalid token {tok!r} (empty or contains whitespace)"
                    )

    @classmethod
    def from_token_lists(cls, segments: Iterable[Sequence[str]], lang: str = "") -> "SegmentedText":
        return cls(tuple(tuple(seg) for seg in segments), lang=lang)

    def flatten(self) -> tuple[str, ...]:
        """The underlying token stream, in order."""
        return tuple(tok for seg in self.segments for tok in seg)

    @property
    def num_segments(self) -> int:
        return len(self.segments)

    @property
    def num_tokens(self) -> int:
        return sum(len(seg) for seg in self.segments)

    def to_lines(self) -> list[str]:
        return [" ".join(seg) for seg in self.segments]


def _decode_utf8(raw: bytes, path: Path) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc


def read_segmented(
    path: str | Path,
    mode: NormalizationMode,
    char_level: bool = False,
    lang: str = "",
) -> SegmentedText:
    """Read a one-segment-per-line UTF-8 file; blank lines are empty segments."""
    path = Path(path)
    raw = path.read_bytes()
    text = _decode_utf8(raw, path)
    segments = [tuple(tokenize(line, mode, char_level)) for line in text.splitlines()]
    return SegmentedText(tuple(segments), lang=lang)


def read_stream(path: str | Path, mode: NormalizationMode, char_level: bool = False) -> list[str]:
    """Read a whole UTF-8 file as one unsegmented token stream."""
    path = Path(path)
    text = _decode_utf8(path.read_bytes(), path)
    return tokenize(text, mode, char_level)


def write_segmented(doc: SegmentedText, path: str | Path) -> None:
    """Write one segment per line (tokens space-joined, LF endings), atomically."""
    path = Path(path)
    data = "".join(line + "\n" for line in doc.to_lines()).encode("utf-8")
    fd, tmp_name = tempfile.mkstemp(prefix=path.name + ".", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
