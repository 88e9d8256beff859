"""Tiny line-delimited JSON aligner/embedding service used as a test double.

align: links equal (casefolded) tokens one-to-one, first occurrence wins.
embed: deterministic per-token hash vectors, mean-pooled, dimension 16.
"""

import json
import sys
import zlib

import numpy as np

DIM = 16


def _token_vector(token: str) -> np.ndarray:
    rng = np.random.default_rng(zlib.crc32(token.encode("utf-8")))
    return rng.standard_normal(DIM)


def _align(src, tgt):
    used = set()
    links = []
    for i, s in enumerate(src):
        for j, t in enumerate(tgt):
            if j not in used and s.casefold() == t.casefold():
                links.append([i, j])
                used.add(j)
                break
    return links


def _embed(sentences):
    vectors = []
    for tokens in sentences:
        vec = np.zeros(DIM)
        for tok in tokens:
            vec += _token_vector(tok)
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec = vec / norm
        else:
            vec = vec + 1.0 / DIM
        vectors.append([round(float(x), 9) for x in vec])
    return vectors


def main() -> None:
    for line in sys.stdin:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            print(json.dumps({"id": None, "error": f"malformed JSON: {exc}"}), flush=True)
            continue
        req_id = request.get("id")
        op = request.get("op")
        if op == "align":
            response = {"id": req_id, "links": _align(request["src"], request["tgt"])}
        elif op == "embed":
            response = {"id": req_id, "vectors": _embed(request["sentences"])}
        else:
            response = {"id": req_id, "error": f"unknown op: {op!r}"}
        print(json.dumps(response), flush=True)


if __name__ == "__main__":
    main()
