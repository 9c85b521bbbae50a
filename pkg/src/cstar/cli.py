"""
CStar - Command Line Interface

This module provides the `cstar verify` command: translation, operational
proof checking and residual proof checking of one annotated C file.
"""

import argparse
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from cstar.errors import CStarError
from cstar.flow import create_verification_flow
from cstar.utils.constants import (
    DEFAULT_CACHE_DIR,
    DEFAULT_LOG_LEVEL,
    ENV_CACHE_DIR,
    ENV_INCLUDE_PATH,
    ENV_LOG_LEVEL,
    EXIT_FAILURE,
    LOG_FORMAT,
)
from cstar.utils.report_writer import build_dump, write_json

logger = logging.getLogger(__name__)


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments.

    Args:
        args (list, optional): Command line arguments

    Returns:
        argparse.Namespace: Parsed arguments
    """
    parser = argparse.ArgumentParser(
        prog="cstar",
        description="Verify annotated C programs with integrated proof code",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="Verify a .cst file")
    verify.add_argument("file", help="Annotated C source to verify")

    verify.add_argument(
        "--proofs",
        help="Residual proof file discharging the remaining verification conditions",
    )

    verify.add_argument(
        "--include",
        "-I",
        action="append",
        default=[],
        metavar="DIR",
        help=f"Add an include directory (repeatable; searched before ${ENV_INCLUDE_PATH})",
    )

    verify.add_argument(
        "--dump-states",
        action="store_true",
        help="Dump the symbolic state at every program point as JSON",
    )

    verify.add_argument(
        "--dump-vcs",
        action="store_true",
        help="Dump the verification conditions as JSON",
    )

    verify.add_argument(
        "--trust-report",
        action="store_true",
        help="Dump the axiom and oracle tags the accepted theorems rely on",
    )

    verify.add_argument(
        "--json",
        nargs="?",
        const="-",
        metavar="FILE",
        help="Write the full run report as JSON to FILE (default: standard output)",
    )

    verify.add_argument(
        "--emit-residual",
        metavar="OUT",
        help="Write a residual proof skeleton with one stub per verification condition",
    )

    verify.add_argument(
        "--no-prelude",
        action="store_true",
        help="Do not include cstarlib.h implicitly",
    )

    verify.add_argument(
        "--progress",
        action="store_true",
        help="Show progress bars on standard error",
    )

    verify.add_argument(
        "--verbose", "-v", action="store_true", help="Enable debug logging and tracebacks"
    )

    # Caching options
    verify.add_argument(
        "--cache",
        action="store_true",
        help="Cache arithmetic oracle verdicts on disk",
    )
    verify.add_argument(
        "--cache-dir",
        default=os.environ.get(ENV_CACHE_DIR, DEFAULT_CACHE_DIR),
        help=f"Directory of the verdict cache (default: ${ENV_CACHE_DIR} or {DEFAULT_CACHE_DIR})",
    )

    return parser.parse_args(args)


def configure_logging(verbose: bool) -> None:
    level_name = "DEBUG" if verbose else os.environ.get(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL).upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def include_dirs(args: argparse.Namespace) -> List[str]:
    """--include directories first, then those of the environment."""
    extra = os.environ.get(ENV_INCLUDE_PATH, "")
    return list(args.include) + [d for d in extra.split(os.pathsep) if d]


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI.

    Args:
        args (list, optional): Command line arguments

    Returns:
        int: Exit code
    """
    load_dotenv()
    args = parse_args(args)
    configure_logging(args.verbose)

    context: Dict[str, Any] = {
        "path": args.file,
        "proofs": args.proofs,
        "include_dirs": include_dirs(args),
        "prelude": not args.no_prelude,
        "dump_states": args.dump_states,
        "dump_vcs": args.dump_vcs,
        "trust_report": args.trust_report,
        "json": args.json,
        "emit_residual": args.emit_residual,
        "progress": args.progress,
        "verbose": args.verbose,
        "cache_enabled": args.cache,
        "cache_dir": args.cache_dir,
        "started_at": time.time(),
    }

    flow = create_verification_flow()

    try:
        flow.run(context)
        return context["exit_code"]
    except CStarError as e:
        print(f"error: {e.describe()}", file=sys.stderr)
        if args.verbose:
            import traceback

            traceback.print_exc()
        _dump_partial_states(context)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        print(f"error: internal error: {str(e)}", file=sys.stderr)
        if args.verbose:
            import traceback

            traceback.print_exc()
        return EXIT_FAILURE
    finally:
        oracle = context.get("oracle")
        if oracle is not None:
            oracle.close()


def _dump_partial_states(context: Dict[str, Any]) -> None:
    """States reached before a failure are still useful for inspection."""
    runtime = context.get("runtime")
    if runtime is None or not context.get("dump_states"):
        return
    runtime.report.states = list(runtime.engine.states)
    write_json(build_dump(runtime.report, states=True))


if __name__ == "__main__":
    sys.exit(main())
