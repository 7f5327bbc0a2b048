"""specred CLI entry point."""

import argparse
import asyncio
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

COMMAND_NAMES = (
    "reduce",
    "greduce",
    "pfd",
    "unfold",
    "hollow",
    "compress",
    "qwalk",
    "pst",
    "divisor",
    "walkgen",
    "demo-hypercube",
    "demo-weighted-pst",
)


def _split(value: str | None) -> list[str] | None:
    if value is None:
        return None
    return [token.strip() for token in value.split(",") if token.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specred",
        description="Isospectral reductions, unfoldings and quantum walk certificates",
    )
    parser.add_argument("command", choices=COMMAND_NAMES, help="Job to run")
    parser.add_argument("inputs", nargs="*", type=Path, help="Input documents (JSON or edge list)")
    parser.add_argument("--backend", choices=("exact", "float"), help="Coefficient field (default: float)")
    parser.add_argument("--subset", help="Comma-separated vertex labels")
    parser.add_argument("--frame", type=Path, help="JSON document holding a 'frame' matrix")
    parser.add_argument("--partition", help="Classes separated by '|', labels by ',' (e.g. 1|2,3|4)")
    parser.add_argument("--length", type=int, default=6, help="Walk series length (default: 6)")
    parser.add_argument("--times", help="Comma-separated times; multiples of pi allowed (pi/2)")
    parser.add_argument("--horizon", default="pi", help="Scan horizon for pst (default: pi)")
    parser.add_argument("--grid", type=int, default=512, help="Scan grid points (default: 512)")
    parser.add_argument("--limit", type=int, default=4, help="Hypercube variants to enumerate (default: 4)")
    parser.add_argument("--hermitian", action="store_true", help="Hermitian unfolding for 'unfold'")
    parser.add_argument("--tol-eps", type=float, help="Equality tolerance (default: 1e-9)")
    parser.add_argument("--tol-delta", type=float, help="Pole cluster tolerance (default: 1e-6)")
    parser.add_argument("--tol-pole", type=float, help="Imaginary part allowed on real poles (default: 1e-8)")
    parser.add_argument("--tol-psd", type=float, help="Residue eigenvalue floor (default: 1e-8)")
    parser.add_argument("--tol-rank", type=float, help="Relative rank cutoff (default: 1e-10)")
    parser.add_argument("--seed", type=int, help="Seed for sampled checks (default: 0)")
    parser.add_argument("--env-file", type=Path, help="Read SPECRED_* settings from this .env file")
    parser.add_argument("--out", type=Path, help="Write the result document here instead of stdout")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose logging")
    return parser


def main():
    args = build_parser().parse_args()

    from specred.config import SolverConfig
    from specred.errors import ParseError
    from specred.formats.persist import dumps_canonical, emit
    from specred.pipeline import EXIT_ERROR, Job, parse_time, run_job

    config = SolverConfig.from_env(args.env_file)

    # Configure logging
    level = logging.DEBUG if args.verbose else config.log_level_value
    logging.basicConfig(
        level=level,
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )

    overrides = {
        "backend": args.backend,
        "eps": args.tol_eps,
        "delta": args.tol_delta,
        "tol_pole": args.tol_pole,
        "tol_psd": args.tol_psd,
        "tol_rank": args.tol_rank,
        "seed": args.seed,
    }
    try:
        config = replace(config, **{k: v for k, v in overrides.items() if v is not None})
        job = Job(
            command=args.command,
            inputs=list(args.inputs),
            subset=_split(args.subset),
            frame=args.frame,
            partition=[_split(c) for c in args.partition.split("|")] if args.partition else None,
            length=args.length,
            times=[parse_time(t) for t in _split(args.times)] if args.times else None,
            horizon=parse_time(args.horizon),
            grid=args.grid,
            limit=args.limit,
            hermitian=args.hermitian,
            out=args.out,
            config=config,
        )
    except (ValueError, ParseError) as exc:
        print(dumps_canonical({"error": type(exc).__name__, "message": str(exc)}), end="", file=sys.stderr)
        sys.exit(EXIT_ERROR)

    result = asyncio.run(run_job(job))

    if result.exit_code == EXIT_ERROR:
        print(dumps_canonical(result.document), end="", file=sys.stderr)
    else:
        emit(result.document, job.out)
        if job.out:
            print(f"Result: {job.out}", file=sys.stderr)
    if result.errors:
        print(f"Warnings: {len(result.errors)}", file=sys.stderr)
        for err in result.errors:
            print(f"  - {err}", file=sys.stderr)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
