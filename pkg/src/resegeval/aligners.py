"""Word-aligner abstraction, a deterministic lexical fallback, and the
client for the external embedding-based aligner service.

The lexical aligner matches tokens by surface similarity only; it exists so
the whole re-segmentation pipeline runs offline. Production use goes through
the newline-delimited JSON service protocol (see ``service_align``).
"""

from __future__ import annotations

import json
import shlex
import socket
import subprocess
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import DataError, ServiceError

__all__ = [
    "AlignmentLinkSet",
    "WordAligner",
    "EmbeddingProvider",
    "lexical_align",
    "LexicalAligner",
    "service_align",
    "AlignerServiceClient",
    "TransportError",
    "ProtocolError",
]

DEFAULT_SIM_THRESHOLD = 0.75


class TransportError(ServiceError):
    """Connection or stream failure while talking to the aligner service."""


class ProtocolError(ServiceError):
    """The aligner service replied with something the protocol forbids."""


@dataclass(frozen=True)
class AlignmentLinkSet:
    """Word-alignment links over one concatenated source/target sentence pair."""

    links: frozenset[tuple[int, int]]
    src_len: int
    tgt_len: int

    def __post_init__(self) -> None:
        if self.src_len < 0 or self.tgt_len < 0:
            raise DataError("token counts must be non-negative")
        for i, j in self.links:
            if not (0 <= i < self.src_len and 0 <= j < self.tgt_len):
                raise DataError(
                    f"link ({i},{j}) out of bounds for {self.src_len} source / {self.tgt_len} target tokens"
                )

    @classmethod
    def from_pairs(cls, pairs, src_len: int, tgt_len: int) -> "AlignmentLinkSet":
        return cls(frozenset((int(i), int(j)) for i, j in pairs), src_len, tgt_len)


@runtime_checkable
class WordAligner(Protocol):
    def align(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentLinkSet: ...


@runtime_checkable
class EmbeddingProvider(Protocol):
    def embed(self, tokens: Sequence[str]) -> np.ndarray: ...


def _char_edit_distance(a: str, b: str, cap: int) -> int:
    """Levenshtein distance between strings, exact while <= cap.

    Returns cap + 1 as soon as the distance provably exceeds cap.
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if abs(la - lb) > cap:
        return cap + 1
    if la == 0 or lb == 0:
        return max(la, lb)
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        lo = max(1, i - cap)
        hi = min(lb, i + cap)
        if lo > 1:
            cur[lo - 1] = cap + 1
        ca = a[i - 1]
        row_min = cur[0] if lo == 1 else cap + 1
        for j in range(lo, hi + 1):
            val = min(
                prev[j - 1] + (0 if ca == b[j - 1] else 1),
                prev[j] + 1,
                cur[j - 1] + 1,
            )
            cur[j] = val
            if val < row_min:
                row_min = val
        for j in range(hi + 1, lb + 1):
            cur[j] = cap + 1
        if row_min > cap:
            return cap + 1
        prev = cur
    return min(prev[lb], cap + 1)


def _char_similarity(a: str, b: str, threshold: float) -> float:
    """1 - edit_distance/max_len, or -1.0 when provably below threshold."""
    max_len = max(len(a), len(b))
    if max_len == 0:
        return -1.0
    cap = int((1.0 - threshold) * max_len)
    dist = _char_edit_distance(a, b, cap)
    if dist > cap:
        return -1.0
    return 1.0 - dist / max_len


def lexical_align(
    src_tokens: Sequence[str],
    tgt_tokens: Sequence[str],
    sim_threshold: float = DEFAULT_SIM_THRESHOLD,
) -> AlignmentLinkSet:
    """Greedy one-to-one matching by normalized character-level similarity.

    Candidate pairs scoring >= sim_threshold are accepted in descending
    (score, -positional distance) order; each token is used at most once.
    """
    if not (0.0 < sim_threshold <= 1.0):
        raise DataError(f"sim_threshold must be in (0, 1], got {sim_threshold}")
    src_len, tgt_len = len(src_tokens), len(tgt_tokens)
    if src_len == 0 or tgt_len == 0:
        return AlignmentLinkSet(frozenset(), src_len, tgt_len)

    ratio = src_len / tgt_len
    src_cf = [t.casefold() for t in src_tokens]
    tgt_cf = [t.casefold() for t in tgt_tokens]
    candidates: list[tuple[float, float, int, int]] = []
    for i, s in enumerate(src_cf):
        for j, t in enumerate(tgt_cf):
            score = _char_similarity(s, t, sim_threshold)
            if score >= sim_threshold:
                candidates.append((-score, abs(i - j * ratio), i, j))
    candidates.sort()

    used_src: set[int] = set()
    used_tgt: set[int] = set()
    links: set[tuple[int, int]] = set()
    for _neg_score, _dist, i, j in candidates:
        if i in used_src or j in used_tgt:
            continue
        links.add((i, j))
        used_src.add(i)
        used_tgt.add(j)
    return AlignmentLinkSet(frozenset(links), src_len, tgt_len)


@dataclass(frozen=True)
class LexicalAligner:
    """WordAligner wrapper around ``lexical_align`` with a fixed threshold."""

    sim_threshold: float = DEFAULT_SIM_THRESHOLD

    def align(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentLinkSet:
        return lexical_align(src_tokens, tgt_tokens, self.sim_threshold)


class AlignerServiceClient:
    """Client for the line-delimited JSON aligner/embedding service.

    One in-flight request per connection; callers needing parallelism open
    independent connections. Implements both the WordAligner and the
    EmbeddingProvider contracts.
    """

    def __init__(self, reader, writer, closer=None):
        self._reader = reader
        self._writer = writer
        self._closer = closer
        self._next_id = 0
        self._dimension: int | None = None

    @classmethod
    def from_command(cls, command: str | Sequence[str]) -> "AlignerServiceClient":
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
            )
        except OSError as exc:
            raise TransportError(f"cannot start aligner service {argv!r}: {exc}") from exc
        return cls(proc.stdout, proc.stdin, closer=lambda: _stop_process(proc))

    @classmethod
    def from_tcp(cls, host: str, port: int, timeout: float = 30.0) -> "AlignerServiceClient":
        try:
            sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise TransportError(f"cannot connect to aligner service at {host}:{port}: {exc}") from exc
        stream = sock.makefile("rw", encoding="utf-8", newline="\n")
        return cls(stream, stream, closer=sock.close)

    @classmethod
    def from_endpoint(cls, endpoint: str) -> "AlignerServiceClient":
        """Parse an endpoint spec: ``cmd:<command line>`` or ``tcp:<host>:<port>``."""
        if endpoint.startswith("cmd:"):
            return cls.from_command(endpoint[4:])
        if endpoint.startswith("tcp:"):
            rest = endpoint[4:]
            host, sep, port = rest.rpartition(":")
            if not sep or not host:
                raise DataError(f"malformed tcp endpoint: {endpoint!r} (expected tcp:host:port)")
            try:
                return cls.from_tcp(host, int(port))
            except ValueError:
                raise DataError(f"malformed tcp endpoint port: {endpoint!r}") from None
        raise DataError(f"unknown endpoint scheme: {endpoint!r} (expected cmd:... or tcp:host:port)")

    def close(self) -> None:
        if self._closer is not None:
            self._closer()
            self._closer = None

    def __enter__(self) -> "AlignerServiceClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _roundtrip(self, request: dict) -> dict:
        req_id = f"req-{self._next_id}"
        self._next_id += 1
        request = {"id": req_id, **request}
        try:
            self._writer.write(json.dumps(request, ensure_ascii=False) + "\n")
            self._writer.flush()
            line = self._reader.readline()
        except (OSError, ValueError) as exc:
            raise TransportError(f"transport failure on request {req_id}: {exc}") from exc
        if not line:
            raise TransportError(f"service closed the stream during request {req_id}")
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed response to request {req_id}: {exc}") from exc
        if not isinstance(response, dict):
            raise ProtocolError(f"malformed response to request {req_id}: not an object")
        if response.get("id") != req_id:
            raise ProtocolError(
                f"response id {response.get('id')!r} does not match request id {req_id!r}"
            )
        if "error" in response:
            raise ServiceError(f"service error on request {req_id}: {response['error']}")
        return response

    def align(self, src_tokens: Sequence[str], tgt_tokens: Sequence[str]) -> AlignmentLinkSet:
        response = self._roundtrip(
            {"op": "align", "src": list(src_tokens), "tgt": list(tgt_tokens)}
        )
        raw = response.get("links")
        if not isinstance(raw, list):
            raise ProtocolError("align response is missing a 'links' list")
        pairs: list[tuple[int, int]] = []
        for item in raw:
            if (
                not isinstance(item, (list, tuple))
                or len(item) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
            ):
                raise ProtocolError(f"malformed link in response: {item!r}")
            pairs.append((item[0], item[1]))
        try:
            return AlignmentLinkSet.from_pairs(pairs, len(src_tokens), len(tgt_tokens))
        except DataError as exc:
            raise ProtocolError(f"service returned out-of-bounds link: {exc}") from exc

    def embed_batch(self, sentences: Sequence[Sequence[str]]) -> list[np.ndarray]:
        response = self._roundtrip(
            {"op": "embed", "sentences": [list(s) for s in sentences]}
        )
        raw = response.get("vectors")
        if not isinstance(raw, list) or len(raw) != len(sentences):
            raise ProtocolError("embed response does not carry one vector per sentence")
        vectors: list[np.ndarray] = []
        for vec in raw:
            if not isinstance(vec, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in vec
            ):
                raise ProtocolError("malformed vector in embed response")
            arr = np.asarray(vec, dtype=np.float64)
            if self._dimension is None:
                self._dimension = arr.shape[0]
            elif arr.shape[0] != self._dimension:
                raise ProtocolError(
                    f"vector dimension {arr.shape[0]} differs from provider dimension {self._dimension}"
                )
            vectors.append(arr)
        return vectors

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        return self.embed_batch([tokens])[0]

    @property
    def dimension(self) -> int | None:
        return self._dimension


def _stop_process(proc: subprocess.Popen) -> None:
    try:
        if proc.stdin is not None:
            proc.stdin.close()
        proc.wait(timeout=10)
    except (OSError, subprocess.TimeoutExpired):
        proc.kill()


def service_align(
    src_tokens: Sequence[str],
    tgt_tokens: Sequence[str],
    endpoint: AlignerServiceClient,
) -> AlignmentLinkSet:
    """Forward one alignment request over an established service connection."""
    return endpoint.align(src_tokens, tgt_tokens)
