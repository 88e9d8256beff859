"""Acceptance suite for the service: protocol conformance and alignment
properties, one printed pass/fail line per criterion
(run with ``pytest tests/test_acceptance.py -s``).
"""

import json
import random
import string
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from alignserve import HashEncoder, mutual_argmax_align, validate_links
from alignserve.encoders import DEFAULT_MODEL, TransformerEncoder


@contextmanager
def criterion(number: int, name: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\n[acceptance] criterion {number} ({name}): FAIL")
        raise
    elapsed = time.perf_counter() - start
    print(f"\n[acceptance] criterion {number} ({name}): PASS in {elapsed:.2f}s (budget {budget_s:.0f}s)")
    assert elapsed < budget_s


def _spawn_service() -> subprocess.Popen:
    return subprocess.Popen(
        [sys.executable, "-m", "alignserve.cli", "--model", "hash:32"],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
        encoding="utf-8",
    )


def test_criterion_8_protocol_conformance():
    with criterion(8, "protocol conformance", 5.0):
        rng = random.Random(808)
        proc = _spawn_service()
        try:
            requests = []
            for k in range(100):
                if k % 2 == 0:
                    requests.append(
                        {
                            "id": f"r{k}",
                            "op": "align",
                            "src": [rng.choice(["uno", "dos", "tres"]) for _ in range(rng.randint(1, 5))],
                            "tgt": [rng.choice(["uno", "dos", "tres"]) for _ in range(rng.randint(1, 5))],
                        }
                    )
                else:
                    requests.append(
                        {
                            "id": f"r{k}",
                            "op": "embed",
                            "sentences": [
                                [rng.choice(["a", "b", "c"]) for _ in range(rng.randint(1, 4))]
                                for _ in range(rng.randint(1, 3))
                            ],
                        }
                    )
            # pipeline everything before reading a single response
            payload = "".join(json.dumps(r) + "\n" for r in requests)
            proc.stdin.write(payload)
            proc.stdin.flush()
            responses = [json.loads(proc.stdout.readline()) for _ in range(100)]
            assert [r["id"] for r in responses] == [f"r{k}" for k in range(100)]
            for req, resp in zip(requests, responses):
                if req["op"] == "align":
                    links = resp["links"]
                    validate_links([tuple(l) for l in links], len(req["src"]), len(req["tgt"]))
                else:
                    assert len(resp["vectors"]) == len(req["sentences"])
                    assert {len(v) for v in resp["vectors"]} == {32}

            # malformed JSON must produce an error object and keep the stream alive
            proc.stdin.write("{oops\n")
            proc.stdin.write(json.dumps({"id": "alive", "op": "align", "src": ["x"], "tgt": ["x"]}) + "\n")
            proc.stdin.flush()
            broken = json.loads(proc.stdout.readline())
            assert broken["id"] is None and "error" in broken
            alive = json.loads(proc.stdout.readline())
            assert alive == {"id": "alive", "links": [[0, 0]]}
        finally:
            proc.stdin.close()
            proc.wait(timeout=10)

        # bounds validation rejects a malformed link
        with pytest.raises(ValueError):
            validate_links([(0, 7)], 2, 2)
        with pytest.raises(ValueError):
            validate_links([(0,)], 2, 2)


def _deployed_encoder():
    try:
        return TransformerEncoder(DEFAULT_MODEL), DEFAULT_MODEL
    except Exception:
        return HashEncoder(), "hash"


def test_criterion_9_mutual_argmax_one_to_one():
    with criterion(9, "mutual argmax one-to-one through the encoder", 120.0):
        encoder, encoder_name = _deployed_encoder()
        print(f"\n[acceptance] criterion 9 runs with encoder: {encoder_name}")
        rng = random.Random(909)
        vocab = ["".join(rng.choices(string.ascii_lowercase, k=rng.randint(3, 8))) for _ in range(60)]
        for trial in range(100):
            src = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
            if trial % 2 == 0:
                tgt = list(src)  # identical tokens in identical contexts
            else:
                tgt = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
            links = mutual_argmax_align(src, tgt, encoder)
            assert len({i for i, _ in links}) == len(links)
            assert len({j for _, j in links}) == len(links)
            validate_links(links, len(src), len(tgt))
            if trial % 2 == 0:
                assert links == [(k, k) for k in range(len(src))]
