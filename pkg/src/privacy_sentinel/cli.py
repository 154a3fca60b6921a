"""Command-line entry points: run the service, or run the simulator."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import load_config
from .errors import SentinelError
from .simulator import HttpBackend, canonical_json, load_sim_config, run_simulation


def _serve(args) -> int:
    import uvicorn

    from .demo import demo_snapshot
    from .service import Engine, create_app

    config = load_config(args.config)
    engine = Engine(
        config=config, genesis=demo_snapshot() if args.demo else None
    )
    app = create_app(engine=engine, static_dir=args.static)
    host, _, port = config.listen_addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def _simulate(args) -> int:
    config = load_sim_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    backend = HttpBackend(base_url=args.via_http) if args.via_http else None
    out = Path(args.out)
    trace_path = out.with_suffix(".csv") if args.emit_csv else None
    report = run_simulation(config, backend=backend, trace_path=trace_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(canonical_json(report))
    print(
        f"simulated {report['steps']} steps: {report['totals']['posts']} posts, "
        f"{report['totals']['warnings']} warnings, "
        f"{report['totals']['reports']} incident reports "
        f"({report['runtime_seconds']:.2f}s) -> {out}"
    )
    if trace_path:
        print(f"trace -> {trace_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentinel",
        description="Adaptive privacy-risk warnings for self-disclosure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", type=Path, default=None, help="engine config JSON")
    serve.add_argument(
        "--demo", action="store_true", help="start from the seeded walkthrough state"
    )
    serve.add_argument(
        "--static", type=Path, default=None, help="directory with the web UI build"
    )
    serve.set_defaults(func=_serve)

    simulate = sub.add_parser("simulate", help="run a seeded simulation")
    simulate.add_argument(
        "--config", type=Path, required=True, help="simulation config JSON"
    )
    simulate.add_argument("--out", type=Path, required=True, help="report JSON path")
    simulate.add_argument("--seed", type=int, default=None, help="override the seed")
    simulate.add_argument(
        "--via-http",
        metavar="URL",
        default=None,
        help="drive a running service instead of the in-process engine",
    )
    simulate.add_argument(
        "--emit-csv", action="store_true", help="also write a per-post trace CSV"
    )
    simulate.set_defaults(func=_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SentinelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
