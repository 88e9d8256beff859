"""Meta-evaluation machinery: Pearson correlation of synthetic-source vs.
manual-source metric scores, the shuffled-source baseline, gap recovery,
controlled-protocol generators, and the ASR-vs-BT decision machinery.

All randomized operations draw from ``random.Random(seed)`` (Mersenne
Twister), so identical seeds reproduce identical outputs on any platform.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .textseg import SegmentedText

__all__ = [
    "ScoreSeries",
    "CorrelationReport",
    "SourceChoice",
    "WinRecord",
    "WinTable",
    "pearson",
    "gap_recovery",
    "correlation_report",
    "shuffle_segments",
    "random_split",
    "recommend_source",
    "count_wins",
    "read_scores",
    "read_win_records",
]

DEFAULT_WER_THRESHOLD = 0.20


@dataclass(frozen=True)
class ScoreSeries:
    """Per-segment metric scores aligned by index."""

    values: tuple[float, ...]
    label: str = ""

    def __len__(self) -> int:
        return len(self.values)


def pearson(x: ScoreSeries | Sequence[float], y: ScoreSeries | Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    xv = np.asarray(x.values if isinstance(x, ScoreSeries) else x, dtype=np.float64)
    yv = np.asarray(y.values if isinstance(y, ScoreSeries) else y, dtype=np.float64)
    if xv.shape != yv.shape:
        raise DataError(f"series length mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if xv.shape[0] < 2:
        raise DataError("pearson requires at least two paired values")
    xd = xv - xv.mean()
    yd = yv - yv.mean()
    sx = float(np.dot(xd, xd))
    sy = float(np.dot(yd, yd))
    if sx == 0.0 or sy == 0.0:
        raise DataError("pearson undefined: a series has zero variance")
    return float(np.dot(xd, yd) / np.sqrt(sx * sy))


def gap_recovery(r_synth: float, r_shuff: float, r_upper: float = 1.0) -> float:
    """Percentage of the shuffled-to-upper correlation gap recovered.

    May exceed 100 or go negative; the bounds are anchors, not clamps.
    """
    if r_upper <= r_shuff:
        raise DataError(
            f"gap recovery undefined: upper bound {r_upper} must exceed shuffled baseline {r_shuff}"
        )
    return 100.0 * (r_synth - r_shuff) / (r_upper - r_shuff)


@dataclass(frozen=True)
class CorrelationReport:
    r_synth: float
    r_shuff: float
    r_upper: float
    gap_recovery_pct: float


def correlation_report(
    manual: ScoreSeries,
    synthetic: ScoreSeries,
    shuffled: ScoreSeries,
    r_upper: float = 1.0,
) -> CorrelationReport:
    """Correlate synthetic and shuffled scores against the manual-source scores."""
    r_synth = pearson(synthetic, manual)
    r_shuff = pearson(shuffled, manual)
    return CorrelationReport(
        r_synth=r_synth,
        r_shuff=r_shuff,
        r_upper=r_upper,
        gap_recovery_pct=gap_recovery(r_synth, r_shuff, r_upper),
    )


def shuffle_segments(doc: SegmentedText, seed: int) -> SegmentedText:
    """Uniform random permutation of segments, deterministic under the seed."""
    rng = random.Random(seed)
    segments = list(doc.segments)
    rng.shuffle(segments)
    return SegmentedText(tuple(segments), lang=doc.lang)


def random_split(
    stream: Sequence[str],
    seed: int,
    min_len: int = 5,
    max_len: int = 100,
    lang: str = "",
) -> SegmentedText:
    """Split a token stream into segments of uniformly drawn lengths.

    The final segment may be shorter than ``min_len``; an empty stream
    yields an empty document.
    """
    if not (1 <= min_len <= max_len):
        raise DataError(f"invalid split lengths: need 1 <= min_len <= max_len, got {min_len}..{max_len}")
    rng = random.Random(seed)
    segments: list[tuple[str, ...]] = []
    pos = 0
    total = len(stream)
    while pos < total:
        length = rng.randint(min_len, max_len)
        segments.append(tuple(stream[pos : pos + length]))
        pos += length
    return SegmentedText(tuple(segments), lang=lang)


class SourceChoice(enum.Enum):
    ASR = "ASR"
    BT = "BT"


def recommend_source(asr_wer: float, threshold: float = DEFAULT_WER_THRESHOLD) -> SourceChoice:
    """ASR transcripts up to the WER threshold (inclusive), back-translation above it."""
    if asr_wer < 0:
        raise DataError(f"WER cannot be negative: {asr_wer}")
    return SourceChoice.ASR if asr_wer <= threshold else SourceChoice.BT


@dataclass(frozen=True)
class WinRecord:
    """One ASR-vs-BT comparison outcome for a (system, language pair) cell."""

    system: str
    lang_pair: str
    asr_wer: float
    asr_corr: float
    bt_corr: float
    biased: bool = False


@dataclass(frozen=True)
class WinTable:
    """ASR/BT win counts bucketed by the ASR WER threshold."""

    threshold: float
    asr_wins_le: int = 0
    asr_wins_gt: int = 0
    bt_wins_le: int = 0
    bt_wins_gt: int = 0
    ties_le: int = 0
    ties_gt: int = 0

    @property
    def asr_wins(self) -> int:
        return self.asr_wins_le + self.asr_wins_gt

    @property
    def bt_wins(self) -> int:
        return self.bt_wins_le + self.bt_wins_gt

    @property
    def ties(self) -> int:
        return self.ties_le + self.ties_gt

    @property
    def total(self) -> int:
        return self.asr_wins + self.bt_wins


def count_wins(records: Iterable[WinRecord], threshold: float = DEFAULT_WER_THRESHOLD) -> WinTable:
    """Tally ASR/BT wins per WER bucket; biased records are excluded,
    exact correlation ties are reported separately rather than attributed."""
    counts = {"asr_le": 0, "asr_gt": 0, "bt_le": 0, "bt_gt": 0, "tie_le": 0, "tie_gt": 0}
    for rec in records:
        if rec.biased:
            continue
        bucket = "le" if rec.asr_wer <= threshold else "gt"
        if rec.asr_corr > rec.bt_corr:
            counts[f"asr_{bucket}"] += 1
        elif rec.bt_corr > rec.asr_corr:
            counts[f"bt_{bucket}"] += 1
        else:
            counts[f"tie_{bucket}"] += 1
    return WinTable(
        threshold=threshold,
        asr_wins_le=counts["asr_le"],
        asr_wins_gt=counts["asr_gt"],
        bt_wins_le=counts["bt_le"],
        bt_wins_gt=counts["bt_gt"],
        ties_le=counts["tie_le"],
        ties_gt=counts["tie_gt"],
    )


def read_scores(path: str | Path, label: str = "") -> ScoreSeries:
    """Read a one-float-per-line score file (line i pairs with segment i)."""
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
    values: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            raise DataError(f"{path}: line {lineno}: empty score line")
        try:
            values.append(float(stripped))
        except ValueError:
            raise DataError(f"{path}: line {lineno}: not a number: {stripped!r}") from None
    return ScoreSeries(tuple(values), label=label or path.name)


_WIN_RECORD_FIELDS = ("system", "lang_pair", "asr_wer", "asr_corr", "bt_corr", "biased")
_TRUE_VALUES = {"true", "1", "yes"}
_FALSE_VALUES = {"false", "0", "no"}


def read_win_records(path: str | Path) -> list[WinRecord]:
    """Read tab-separated win records; the header row names the fields."""
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
    lines = text.splitlines()
    if not lines:
        raise DataError(f"{path}: missing header row")
    header = [col.strip() for col in lines[0].split("\t")]
    missing = [name for name in _WIN_RECORD_FIELDS if name not in header]
    if missing:
        raise DataError(f"{path}: header is missing fields: {', '.join(missing)}")
    idx = {name: header.index(name) for name in _WIN_RECORD_FIELDS}
    records: list[WinRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) < len(header):
            raise DataError(f"{path}: line {lineno}: expected {len(header)} columns, got {len(cols)}")
        try:
            raw_biased = cols[idx["biased"]].strip().lower()
            if raw_biased in _TRUE_VALUES:
                biased = True
            elif raw_biased in _FALSE_VALUES:
                biased = False
            else:
                raise ValueError(f"not a boolean: {raw_biased!r}")
            records.append(
                WinRecord(
                    system=cols[idx["system"]].strip(),
                    lang_pair=cols[idx["lang_pair"]].strip(),
                    asr_wer=float(cols[idx["asr_wer"]]),
                    asr_corr=float(cols[idx["asr_corr"]]),
                    bt_corr=float(cols[idx["bt_corr"]]),
                    biased=biased,
                )
            )
        except ValueError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from None
    return records
