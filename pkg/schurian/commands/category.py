import logging
from argparse import Namespace

from schurian.commands.common import add_input_arguments, load_category
from schurian.exceptions import InternalError, SchurianError
from schurian.models import ValidationReport, ViolationEntry
from schurian.services.category_service import CategoryService
from schurian.services.exactalg import Field
from schurian.services.file_service import FileService

logger = logging.getLogger(__name__)


def cmd_validate(args: Namespace):
    """Report every axiom violation of a category file"""
    try:
        args.no_validate = True
        cat = load_category(args)
        violations = CategoryService.validate(cat)
        report = ValidationReport(
            valid=not violations,
            objects=len(cat.objects),
            homs=len(cat.homs),
            violations=[ViolationEntry(kind=v.kind, message=v.message, morphisms=list(v.morphisms)) for v in violations],
        )
        return report, 0 if report.valid else 2
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error validating category: {e}")
        raise InternalError(f"Failed to validate category: {str(e)}")


def cmd_gen(args: Namespace):
    """Emit a built-in example category"""
    try:
        field = Field.parse(args.field)
        if args.family == "groupoid":
            cat = CategoryService.build_complete_groupoid(args.n, field)
        else:
            cat = CategoryService.build_broken_ladder(args.m, args.s, field)
        return FileService.emit_category_file(cat), 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error generating category: {e}")
        raise InternalError(f"Failed to generate category: {str(e)}")


def register(sub) -> None:
    v = sub.add_parser("validate", help="Check the Schurian category axioms")
    add_input_arguments(v)
    v.set_defaults(func=cmd_validate)

    g = sub.add_parser("gen", help="Generate an example category")
    g.add_argument("--field", default="q", help="q or gf:P")
    families = g.add_subparsers(dest="family", required=True)
    groupoid = families.add_parser("groupoid", help="Complete Schurian groupoid on N objects")
    groupoid.add_argument("n", type=int)
    ladder = families.add_parser("ladder", help="Broken ladder truncated at M with break S")
    ladder.add_argument("m", type=int)
    ladder.add_argument("s", type=int)
    g.set_defaults(func=cmd_gen)
