"""
Command-line entry point: run a session script and print its reports.

    python cli.py session.trace --format json --seed 7 --jobs 4
    echo "ring R = F2[x,y]/(x^2, y^2); check thm-3.9 on R;" | python cli.py

Exit codes: 0 ok, 1 counterexample, 2 parse or usage error, 3 resource cap, 4 engine disagreement.
"""

import argparse
import logging
import sys

from engine.errors import ConfigurationError
from processors.session_processor import FORMATS, SessionProcessor
from utils.config import get_settings
from utils.file_utils import read_session

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Trace ideals, Ext and rigidity over quotient rings")
    parser.add_argument("session", nargs="?", default="-", help="session script (default: stdin)")
    parser.add_argument("--format", choices=FORMATS, default="text", help="report format")
    parser.add_argument("--seed", type=int, help="seed for random censuses")
    parser.add_argument("--jobs", type=int, help="worker threads for censuses")
    parser.add_argument("--max-degree", type=int, help="Buchberger degree cap")
    parser.add_argument("--ext-bound", type=int, help="largest i tried by bounded Ext checks")
    parser.add_argument("--dim-cap", type=int, help="largest algebra dimension enumerated")
    parser.add_argument("--log-level", help="logging level for stderr diagnostics")
    parser.add_argument("--no-timings", action="store_true", help="leave wall_ms out of JSON reports")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        level = (args.log_level or get_settings().log_level).upper()
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = read_session(args.session)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    processor = SessionProcessor(seed=args.seed, jobs=args.jobs, max_degree=args.max_degree,
                                 ext_bound=args.ext_bound, dim_cap=args.dim_cap)
    try:
        result = processor.process(text)
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    output = result.render(args.format, timings=not args.no_timings)
    if output:
        print(output)
    for item in result.results:
        if item.kind == "error":
            print(f"error: {item.value['error']}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
