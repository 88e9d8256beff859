"""Word-aligner and sentence-embedding service speaking line-delimited JSON."""

from .align import mutual_argmax_align, sentence_embedding, validate_links
from .encoders import HashEncoder, TokenEncoder, TransformerEncoder, build_encoder
from .server import serve, serve_tcp

__version__ = "0.1.0"

__all__ = [
    "HashEncoder",
    "TokenEncoder",
    "TransformerEncoder",
    "build_encoder",
    "mutual_argmax_align",
    "sentence_embedding",
    "serve",
    "serve_tcp",
    "validate_links",
]
