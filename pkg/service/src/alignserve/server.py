"""Single-threaded request loop speaking line-delimited JSON.

One request per line in, one response per line out, in request order.
Malformed input never kills the stream: it yields an error object and the
loop continues. Every outgoing link set is validated (bounds, one-to-one)
before it is written.
"""

from __future__ import annotations

import json
import socket
from typing import IO

from .align import mutual_argmax_align, sentence_embedding, validate_links
from .encoders import TokenEncoder

VECTOR_DECIMALS = 9


def _is_token_list(value) -> bool:
    return isinstance(value, list) and all(isinstance(t, str) for t in value)


def _handle(request: dict, encoder: TokenEncoder) -> dict:
    req_id = request.get("id")
    op = request.get("op")
    if op == "align":
        src, tgt = request.get("src"), request.get("tgt")
        if not _is_token_list(src) or not _is_token_list(tgt):
            return {"id": req_id, "error": "align needs 'src' and 'tgt' lists of strings"}
        if not src or not tgt:
            return {"id": req_id, "error": "align needs non-empty token lists"}
        links = mutual_argmax_align(src, tgt, encoder)
        validate_links(links, len(src), len(tgt))
        return {"id": req_id, "links": [[i, j] for i, j in links]}
    if op == "embed":
        sentences = request.get("sentences")
        if not isinstance(sentences, list) or not all(_is_token_list(s) for s in sentences):
            return {"id": req_id, "error": "embed needs 'sentences' as a list of token lists"}
        vectors = [
            [round(float(x), VECTOR_DECIMALS) for x in sentence_embedding(tokens, encoder)]
            for tokens in sentences
        ]
        return {"id": req_id, "vectors": vectors}
    return {"id": req_id, "error": f"unknown request kind: {op!r}"}


def serve(in_stream: IO[str], out_stream: IO[str], encoder: TokenEncoder) -> None:
    """Serve until EOF on the input stream."""
    for line in in_stream:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request is not a JSON object")
        except ValueError as exc:
            response = {"id": None, "error": f"malformed request: {exc}"}
        else:
            try:
                response = _handle(request, encoder)
            except Exception as exc:  # model/encoder failure must not kill the loop
                response = {"id": request.get("id"), "error": f"{type(exc).__name__}: {exc}"}
        out_stream.write(json.dumps(response, ensure_ascii=False) + "\n")
        out_stream.flush()


def serve_tcp(host: str, port: int, encoder: TokenEncoder, ready_callback=None) -> None:
    """Accept connections sequentially, serving each until its EOF."""
    with socket.create_server((host, port)) as server:
        if ready_callback is not None:
            ready_callback(server.getsockname()[1])
        while True:
            conn, _addr = server.accept()
            with conn:
                stream = conn.makefile("rw", encoding="utf-8", newline="\n")
                serve(stream, stream, encoder)
