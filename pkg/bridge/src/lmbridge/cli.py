"""lmbridge entry point.

    lmbridge --model tiny                          # stdio transport
    lmbridge --model hf:t5-small --http 0.0.0.0:8130
"""

from __future__ import annotations

import argparse
import logging
import sys

from .model import BridgeConfig, load_model
from .server import serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmbridge", description=__doc__.splitlines()[0])
    parser.add_argument("--model", required=True,
                        help="'tiny' (offline random-weight model) or 'hf:<name-or-path>'")
    transport = parser.add_mutually_exclusive_group()
    transport.add_argument("--stdio", action="store_true", default=False,
                           help="serve over stdin/stdout (default)")
    transport.add_argument("--http", metavar="HOST:PORT", default=None,
                           help="serve a single HTTP POST endpoint")
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--seed", type=int, default=0,
                        help="weight seed for the tiny model")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    config = BridgeConfig(
        model=args.model,
        transport=args.http if args.http else "stdio",
        device=args.device,
        seed=args.seed,
    )
    try:
        scorer = load_model(config.model, device=config.device, seed=config.seed)
    except ValueError as exc:
        print(f"lmbridge: {exc}", file=sys.stderr)
        return 1
    serve(scorer, config.transport)
    return 0


if __name__ == "__main__":
    sys.exit(main())
