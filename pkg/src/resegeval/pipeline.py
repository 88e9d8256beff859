"""End-to-end cross-lingual re-segmentation over document files.

Two stages: the minimum-WER pass segments the source-language stream
against the back-translation of the reference translation (segment-aligned
to it by construction), then the refinement pass fixes boundary words by
word-aligning the source segments against the reference translation itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aligners import WordAligner
from .errors import DataError
from .mwer import mwer_segment
from .refine import BoundaryDecision, refine_all
from .textseg import NormalizationMode, SegmentedText

__all__ = ["ResegJob", "xl_resegment", "xlr_resegment"]


@dataclass(frozen=True)
class ResegJob:
    """One re-segmentation job over a single document.

    ``bt`` must carry one segment per reference-translation segment.
    """

    asr_stream: tuple[str, ...]
    bt: SegmentedText
    ref_translation: SegmentedText
    aligner: WordAligner | None = None
    mode: NormalizationMode = NormalizationMode.WP

    def __post_init__(self) -> None:
        if self.bt.num_segments != self.ref_translation.num_segments:
            raise DataError(
                f"back-translation has {self.bt.num_segments} segments but the reference "
                f"translation has {self.ref_translation.num_segments}"
            )


def xl_resegment(job: ResegJob) -> SegmentedText:
    """Segment the source stream to mirror the reference segmentation via the BT proxy."""
    if job.bt.num_segments == 0:
        raise DataError("cannot re-segment against an empty back-translation")
    return mwer_segment(job.asr_stream, job.bt).resegmented


def xlr_resegment(job: ResegJob) -> tuple[SegmentedText, list[BoundaryDecision]]:
    """Two-stage re-segmentation: minimum-WER pass plus boundary refinement.

    Refinement aligns the source segments against the reference translation
    (cross-lingually), not against the back-translation.
    """
    if job.aligner is None:
        raise DataError("xlr_resegment requires a word aligner")
    coarse = xl_resegment(job)
    return refine_all(coarse, job.ref_translation, job.aligner)
