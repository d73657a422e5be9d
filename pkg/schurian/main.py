import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from schurian.commands import COMMAND_GROUPS
from schurian.config import settings
from schurian.exceptions import InvalidCategoryError, SchurianError
from schurian.models import ErrorReport, ViolationEntry

# Configure logging; reports own stdout
logging.basicConfig(
    level=logging.DEBUG if settings.debug else settings.log_level.upper(),
    stream=sys.stderr,
    format="%(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Schurian categories: CW complexes, fundamental groups, gradings and HH1",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for group in COMMAND_GROUPS:
        group.register(sub)
    return parser


def _error_report(e: SchurianError) -> ErrorReport:
    violations = None
    if isinstance(e, InvalidCategoryError):
        violations = [ViolationEntry(kind=v.kind, message=v.message, morphisms=list(v.morphisms)) for v in e.violations]
    return ErrorReport(detail=e.detail, violations=violations)


def _write(stdout: TextIO, result) -> None:
    if isinstance(result, str):
        stdout.write(result if result.endswith("\n") else result + "\n")
        return
    payload = result.model_dump(mode="json", by_alias=True, exclude_none=isinstance(result, ErrorReport))
    stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def run(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse arguments, dispatch one command and print its report.

    Args:
        argv: Command line without the program name (defaults to sys.argv[1:])
        stdin: Stream read when the category argument is "-"
        stdout: Stream receiving the JSON report

    Returns:
        Exit status: 0 success, 1 mathematical failure, 2 input error
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    args.stdin = stdin

    try:
        result, status = args.func(args)
    except SchurianError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        _write(stdout, _error_report(e))
        return e.exit_code
    _write(stdout, result)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
