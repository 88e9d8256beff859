import io
import json
import random

import pytest

from resegeval.aligners import (
    AlignerServiceClient,
    AlignmentLinkSet,
    LexicalAligner,
    ProtocolError,
    TransportError,
    lexical_align,
)
from resegeval.errors import DataError, ServiceError


def test_link_set_bounds_checked():
    with pytest.raises(DataError):
        AlignmentLinkSet.from_pairs([(0, 2)], src_len=1, tgt_len=2)
    with pytest.raises(DataError):
        AlignmentLinkSet.from_pairs([(-1, 0)], src_len=1, tgt_len=1)
    ok = AlignmentLinkSet.from_pairs([(0, 1)], src_len=1, tgt_len=2)
    assert ok.links == {(0, 1)}


def test_lexical_identical_token():
    assert lexical_align(["hola"], ["hola"], 0.8).links == {(0, 0)}


def test_lexical_dissimilar_tokens():
    assert lexical_align(["abc"], ["xyz"], 0.8).links == set()


def test_lexical_cognates():
    links = lexical_align(["presidente", "europa"], ["president", "europe"], 0.7)
    assert links.links == {(0, 0), (1, 1)}


def test_lexical_self_alignment_is_diagonal():
    tokens = ["alpha", "bravo", "charlie", "delta"]
    links = lexical_align(tokens, tokens, 0.75)
    assert links.links == {(k, k) for k in range(len(tokens))}


def test_lexical_self_alignment_diagonal_even_with_duplicates():
    tokens = ["the", "cat", "the", "mat"]
    links = lexical_align(tokens, tokens, 0.75)
    assert links.links == {(k, k) for k in range(len(tokens))}


def test_lexical_one_to_one():
    rng = random.Random(11)
    words = ["casa", "case", "caso", "cosa", "mare", "mure", "perro", "pero"]
    for _ in range(100):
        src = [rng.choice(words) for _ in range(rng.randint(0, 6))]
        tgt = [rng.choice(words) for _ in range(rng.randint(0, 6))]
        links = lexical_align(src, tgt, 0.6)
        assert len({i for i, _ in links.links}) == len(links.links)
        assert len({j for _, j in links.links}) == len(links.links)


def test_lexical_threshold_validated():
    with pytest.raises(DataError):
        lexical_align(["a"], ["a"], 0.0)
    with pytest.raises(DataError):
        lexical_align(["a"], ["a"], 1.5)


def test_lexical_empty_sides():
    assert lexical_align([], ["a"], 0.8).links == set()
    assert lexical_align(["a"], [], 0.8).links == set()


def test_lexical_aligner_wrapper_deterministic():
    aligner = LexicalAligner(sim_threshold=0.7)
    a = aligner.align(["uno", "dos"], ["uno", "dos"])
    b = aligner.align(["uno", "dos"], ["uno", "dos"])
    assert a == b


class _ScriptedTransport:
    """In-process fake of the service stream: parses each request line and
    replies according to a callback."""

    def __init__(self, respond):
        self._respond = respond
        self._pending: list[str] = []

    def write(self, data: str) -> None:
        for line in data.splitlines():
            request = json.loads(line)
            response = self._respond(request)
            self._pending.append(response if isinstance(response, str) else json.dumps(response))

    def flush(self) -> None:
        pass

    def readline(self) -> str:
        if not self._pending:
            return ""
        return self._pending.pop(0) + "\n"


def _client(respond) -> AlignerServiceClient:
    transport = _ScriptedTransport(respond)
    return AlignerServiceClient(reader=transport, writer=transport)


def test_service_align_roundtrip():
    client = _client(lambda req: {"id": req["id"], "links": [[0, 0]]})
    links = client.align(["hello"], ["hallo"])
    assert links.links == {(0, 0)}
    assert links.src_len == 1 and links.tgt_len == 1


def test_service_align_out_of_bounds_rejected():
    client = _client(lambda req: {"id": req["id"], "links": [[0, len(req["tgt"])]]})
    with pytest.raises(ProtocolError, match="out-of-bounds"):
        client.align(["a"], ["b"])


def test_service_align_malformed_link_rejected():
    client = _client(lambda req: {"id": req["id"], "links": [[0, "x"]]})
    with pytest.raises(ProtocolError, match="malformed link"):
        client.align(["a"], ["b"])


def test_service_closed_stream_carries_request_id():
    client = _client(lambda req: None)

    class DeadTransport(_ScriptedTransport):
        def write(self, data):
            pass

    dead = DeadTransport(lambda req: None)
    client = AlignerServiceClient(reader=dead, writer=dead)
    with pytest.raises(TransportError, match="req-0"):
        client.align(["a"], ["b"])


def test_service_id_mismatch_rejected():
    client = _client(lambda req: {"id": "wrong", "links": []})
    with pytest.raises(ProtocolError, match="does not match"):
        client.align(["a"], ["b"])


def test_service_error_response_raised():
    client = _client(lambda req: {"id": req["id"], "error": "model exploded"})
    with pytest.raises(ServiceError, match="model exploded"):
        client.align(["a"], ["b"])


def test_service_embed_dimension_enforced():
    calls = {"n": 0}

    def respond(req):
        calls["n"] += 1
        dim = 3 if calls["n"] == 1 else 4
        return {"id": req["id"], "vectors": [[0.1] * dim for _ in req["sentences"]]}

    client = _client(respond)
    vec = client.embed(["one"])
    assert vec.shape == (3,)
    assert client.dimension == 3
    with pytest.raises(ProtocolError, match="dimension"):
        client.embed(["two"])


def test_service_request_ids_increment():
    seen = []

    def respond(req):
        seen.append(req["id"])
        return {"id": req["id"], "links": []}

    client = _client(respond)
    client.align(["a"], ["b"])
    client.align(["a"], ["b"])
    assert seen == ["req-0", "req-1"]


def test_endpoint_parsing_errors():
    with pytest.raises(DataError):
        AlignerServiceClient.from_endpoint("http://nope")
    with pytest.raises(DataError):
        AlignerServiceClient.from_endpoint("tcp:misformed")
    with pytest.raises(DataError):
        AlignerServiceClient.from_endpoint("tcp:host:notaport")
