"""Cross-lingual re-segmentation of speech-translation output and a
meta-evaluation harness for source-aware MT metrics."""

from .aligners import (
    AlignerServiceClient,
    AlignmentLinkSet,
    EmbeddingProvider,
    LexicalAligner,
    ProtocolError,
    TransportError,
    WordAligner,
    lexical_align,
    service_align,
)
from .editops import (
    EditOp,
    EditOpKind,
    EditSummary,
    corpus_wer,
    cosine,
    doc_similarity,
    edit_align,
)
from .errors import DataError, ServiceError
from .harness import (
    CorrelationReport,
    ScoreSeries,
    SourceChoice,
    WinRecord,
    WinTable,
    count_wins,
    gap_recovery,
    pearson,
    random_split,
    read_scores,
    read_win_records,
    recommend_source,
    shuffle_segments,
)
from .mwer import SegmentationResult, mwer_segment
from .pipeline import ResegJob, xl_resegment, xlr_resegment
from .refine import BoundaryDecision, count_cross_alignments, refine_all, refine_boundary
from .textseg import (
    NormalizationMode,
    SegmentedText,
    read_segmented,
    read_stream,
    tokenize,
    write_segmented,
)

__version__ = "0.1.0"

__all__ = [
    "AlignerServiceClient",
    "AlignmentLinkSet",
    "BoundaryDecision",
    "CorrelationReport",
    "DataError",
    "EditOp",
    "EditOpKind",
    "EditSummary",
    "EmbeddingProvider",
    "LexicalAligner",
    "NormalizationMode",
    "ProtocolError",
    "ResegJob",
    "ScoreSeries",
    "SegmentationResult",
    "SegmentedText",
    "ServiceError",
    "SourceChoice",
    "TransportError",
    "WinRecord",
    "WinTable",
    "WordAligner",
    "corpus_wer",
    "cosine",
    "count_cross_alignments",
    "count_wins",
    "doc_similarity",
    "edit_align",
    "gap_recovery",
    "lexical_align",
    "mwer_segment",
    "pearson",
    "random_split",
    "read_scores",
    "read_segmented",
    "read_stream",
    "read_win_records",
    "recommend_source",
    "refine_all",
    "refine_boundary",
    "service_align",
    "shuffle_segments",
    "tokenize",
    "write_segmented",
    "xl_resegment",
    "xlr_resegment",
]
