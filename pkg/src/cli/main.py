"""
virtual-ext: REPL, script runner and oracle reports.

    virtual-ext                          interactive session
    virtual-ext --script demo.vx         evaluate a script line by line
    virtual-ext vet --universe 2 --all   exhaustive extension checks
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from loguru import logger

from src.config import configure
from src.core.errors import VirtualExtensionError
from src.cli.session import Session, diagnostic
from src.oracle.fragment import enumerate_fragment
from src.oracle.vet import ITEMS, summary_table, vet_exhaustive, write_jsonl

PROMPT = "vx> "


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="virtual-ext", description="Exact arithmetic on virtual extensions")
    parser.add_argument("--horizon", type=int, help="sampling bound for the lazy tier (default 10000)")
    parser.add_argument("--tol", type=float, help="tolerance for the lazy tier (default 1e-9)")
    parser.add_argument("--max-period", type=int, help="period cap (default 64)")
    parser.add_argument("--max-degree", type=int, help="degree cap (default 32)")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--json", action="store_true", help="print machine-readable JSON")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    parser.add_argument("--script", type=Path, help="evaluate a script file")
    parser.add_argument("--keep-going", action="store_true", help="continue a script after a diagnostic")

    sub = parser.add_subparsers(dest="command")
    vet = sub.add_parser("vet", help="verify the extension theorem on a finite fragment")
    vet.add_argument("--universe", type=int, default=2, help="size of the base universe")
    vet.add_argument("--max-period", type=int, dest="vet_max_period", default=2, help="largest period enumerated")
    vet.add_argument("--arity", type=int, default=2, help="largest relation arity")
    group = vet.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="check every relation (default)")
    group.add_argument("--sample", type=int, help="check this many random relations per arity")
    vet.add_argument("--seed", type=int, dest="vet_seed", help="seed for --sample")
    vet.add_argument("--items", nargs="+", choices=ITEMS, help="restrict to these items")
    vet.add_argument("--output", type=Path, help="write reports as JSON lines")
    return parser


def setup_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def emit(session_output, as_json: bool, out: TextIO) -> None:
    print(session_output.model_dump_json(exclude_none=True) if as_json else session_output.render(), file=out)


def run_line(session: Session, text: str, line: int, as_json: bool, out: TextIO) -> bool:
    """Evaluate one line and print its result or diagnostic; False on a diagnostic"""
    try:
        result = session.run_line(text, line)
    except VirtualExtensionError as e:
        logger.error(f"line {line}: {type(e).__name__}: {e}")
        emit(diagnostic(e), as_json, out)
        return False
    if result is not None:
        emit(result, as_json, out)
    return True


def run_script(path: Path, as_json: bool = False, keep_going: bool = False, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    logger.info(f"Running script {path}")
    session, status = Session(), 0
    for number, text in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not run_line(session, text, number, as_json, out):
            status = 1
            if not keep_going:
                break
    logger.info(f"Script finished with status {status}")
    return status


def run_repl(as_json: bool = False, stdin: Optional[TextIO] = None, out: Optional[TextIO] = None) -> int:
    stdin, out = stdin or sys.stdin, out or sys.stdout
    try:
        import readline  # noqa: F401
    except ImportError:
        pass
    session, number = Session(), 0
    interactive = stdin.isatty()
    while True:
        if interactive:
            print(PROMPT, end="", file=out, flush=True)
        text = stdin.readline()
        if not text:
            break
        number += 1
        run_line(session, text, number, as_json, out)
    return 0


def run_vet(args, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    model = enumerate_fragment(args.universe, args.vet_max_period)
    reports = vet_exhaustive(
        model, arity_cap=args.arity, sample=args.sample, seed=args.vet_seed, items=args.items
    )
    if args.output:
        write_jsonl(reports, args.output)
    if args.json:
        for r in reports:
            print(r.model_dump_json(), file=out)
    else:
        print(f"model: {model.describe()}", file=out)
        print(summary_table(reports).to_string(), file=out)
    return 1 if any(r.verdict == "Fails" for r in reports) else 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        configure(
            horizon=args.horizon,
            tol=args.tol,
            max_period=args.max_period,
            max_degree=args.max_degree,
            seed=args.seed,
        )
    except ValueError as e:
        print(f"invalid settings: {e}", file=sys.stderr)
        return 2
    if args.command == "vet":
        try:
            return run_vet(args)
        except VirtualExtensionError as e:
            logger.error(f"vet run failed: {e}")
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
            return 1
    if args.script:
        return run_script(args.script, as_json=args.json, keep_going=args.keep_going)
    return run_repl(as_json=args.json)


if __name__ == "__main__":
    sys.exit(main())
