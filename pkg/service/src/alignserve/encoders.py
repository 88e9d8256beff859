"""Token encoders producing one contextual vector per token.

Two implementations: a multilingual masked-language-model encoder (lazy
imports, needs model weights) and a fast deterministic hash encoder for
offline use and testing. Both return unit-norm rows so dot products are
cosine similarities.
"""

from __future__ import annotations

import zlib
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

DEFAULT_MODEL = "bert-base-multilingual-cased"
DEFAULT_LAYER = 8
HASH_DIM = 64
_CONTEXT_WEIGHT = 0.15


@runtime_checkable
class TokenEncoder(Protocol):
    dimension: int

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        """Return a (len(tokens), dimension) matrix of unit-norm vectors."""
        ...


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return matrix / norms


class HashEncoder:
    """Deterministic stand-in for a contextual encoder.

    Each token gets a pseudo-random unit vector seeded by its bytes, mixed
    with a small fraction of its neighbors' vectors, so identical tokens in
    identical local contexts encode identically while repeated tokens in
    different contexts stay distinguishable.
    """

    def __init__(self, dimension: int = HASH_DIM, context_weight: float = _CONTEXT_WEIGHT):
        self.dimension = dimension
        self.context_weight = context_weight

    def _token_vector(self, token: str) -> np.ndarray:
        rng = np.random.default_rng(zlib.crc32(token.encode("utf-8")))
        vec = rng.standard_normal(self.dimension)
        return vec / np.linalg.norm(vec)

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dimension))
        base = np.stack([self._token_vector(tok) for tok in tokens])
        mixed = base.copy()
        mixed[1:] += self.context_weight * base[:-1]
        mixed[:-1] += self.context_weight * base[1:]
        return _normalize_rows(mixed)


class TransformerEncoder:
    """Contextual token vectors from a multilingual MLM encoder.

    Sub-token vectors from the chosen hidden layer are mean-pooled per
    input token. Requires the ``transformer`` extra and downloadable model
    weights.
    """

    def __init__(self, model_name: str = DEFAULT_MODEL, layer: int = DEFAULT_LAYER):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self.model_name = model_name
        self.layer = layer
        self.tokenizer = AutoTokenizer.from_pretrained(model_name)
        self.model = AutoModel.from_pretrained(model_name, output_hidden_states=True)
        self.model.eval()
        self.dimension = int(self.model.config.hidden_size)

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dimension))
        enc = self.tokenizer(
            list(tokens),
            is_split_into_words=True,
            return_tensors="pt",
            truncation=True,
        )
        with self._torch.no_grad():
            hidden = self.model(**enc).hidden_states[self.layer][0].numpy()
        pooled = np.zeros((len(tokens), self.dimension))
        counts = np.zeros(len(tokens))
        for pos, word_id in enumerate(enc.word_ids(0)):
            if word_id is not None:
                pooled[word_id] += hidden[pos]
                counts[word_id] += 1
        counts[counts == 0.0] = 1.0
        return _normalize_rows(pooled / counts[:, None])


def build_encoder(spec: str, layer: int = DEFAULT_LAYER) -> TokenEncoder:
    """Build an encoder from a spec string: ``hash``, ``hash:<dim>``, or a model id."""
    if spec == "hash":
        return HashEncoder()
    if spec.startswith("hash:"):
        return HashEncoder(dimension=int(spec.split(":", 1)[1]))
    return TransformerEncoder(model_name=spec, layer=layer)
