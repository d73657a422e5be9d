import logging
from argparse import ArgumentParser, Namespace
from typing import Dict, Iterable, List

from schurian.services.category_service import SchurianCategory, Walk
from schurian.services.exactalg import Field
from schurian.services.file_service import FileService

logger = logging.getLogger(__name__)


def add_input_arguments(parser: ArgumentParser) -> None:
    """Category file argument plus parsing switches shared by analysis commands"""
    parser.add_argument("category", nargs="?", default="-", help="Category file (default: standard input)")
    parser.add_argument("--strict", action="store_true", default=None, help="Require every composable pair to be listed")
    parser.add_argument("--no-validate", action="store_true", help="Skip the axiom check on load")


def add_field_argument(parser: ArgumentParser) -> None:
    parser.add_argument("--field", default=None, help="q or gf:P (default: the category's field)")


def add_base_argument(parser: ArgumentParser) -> None:
    parser.add_argument("--base", default=None, help="Base object (default: first declared object)")


def load_category(args: Namespace) -> SchurianCategory:
    if args.category == "-":
        text = args.stdin.read()
    else:
        text = FileService.read_text(args.category)
    cat = FileService.parse_category_text(text, strict=args.strict, validate=False if args.no_validate else None)
    logger.info(f"Loaded category: {len(cat.objects)} objects, {len(cat.homs)} morphisms")
    return cat


def resolve_field(args: Namespace, cat: SchurianCategory) -> Field:
    return Field.parse(args.field) if args.field else cat.field


def resolve_base(args: Namespace, cat: SchurianCategory) -> str:
    return cat.require_object(args.base) if args.base else cat.objects[0]


def scalar_map(field: Field, names: Iterable[str], values: Iterable) -> Dict[str, str]:
    return {name: field.to_string(v) for name, v in zip(names, values)}


def walk_strings(walk: Walk) -> List[str]:
    """Traversal-order steps, reversed steps marked ^-1"""
    return [name if sign == 1 else f"{name}^-1" for name, sign in walk.steps]
