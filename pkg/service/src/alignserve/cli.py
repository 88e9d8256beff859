"""Service entry point: stdio by default, TCP with --tcp."""

from __future__ import annotations

import argparse
import sys

from .encoders import DEFAULT_LAYER, DEFAULT_MODEL, build_encoder
from .server import serve, serve_tcp


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="alignserve",
        description="Word-aligner and sentence-embedding service over line-delimited JSON",
    )
    parser.add_argument(
        "--model",
        default="hash",
        help=f"encoder: 'hash', 'hash:<dim>', or a multilingual MLM model id "
             f"such as {DEFAULT_MODEL} (default: hash)",
    )
    parser.add_argument(
        "--layer", type=int, default=DEFAULT_LAYER,
        help=f"hidden layer for transformer encoders (default: {DEFAULT_LAYER})",
    )
    parser.add_argument(
        "--tcp", default=None, metavar="HOST:PORT",
        help="listen on a TCP socket instead of stdio",
    )
    args = parser.parse_args(argv)

    encoder = build_encoder(args.model, layer=args.layer)
    if args.tcp:
        host, sep, port = args.tcp.rpartition(":")
        if not sep or not host:
            parser.error(f"malformed --tcp value: {args.tcp!r}")
        serve_tcp(host, int(port), encoder)
    else:
        serve(sys.stdin, sys.stdout, encoder)
    return 0


if __name__ == "__main__":
    sys.exit(main())
