"""Run the HTTP service: python -m recoverykit.service [--host H] [--port P]."""

from __future__ import annotations

import argparse

import uvicorn

from .app import app


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="recoverykit.service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
