import logging
from argparse import Namespace

from schurian.commands.common import add_base_argument, add_input_arguments, load_category, resolve_base, walk_strings
from schurian.exceptions import InternalError, MalformedInputError, SchurianError
from schurian.models import (
    ConjugateReport,
    ConnectedGradingReport,
    GradingCheckReport,
    QuotientReport,
    SmashReport,
    UniversalGradingReport,
    ViolationEntry,
    WitnessReport,
    ZGradingReport,
)
from schurian.services.category_service import CategoryService, SchurianCategory
from schurian.services.cw_service import CwService
from schurian.services.file_service import FileService
from schurian.services.grading_service import ConnectorSet, Grading, GradingService
from schurian.services.presentation_service import PresentationService, word_to_strings

logger = logging.getLogger(__name__)


def _grading(args: Namespace, cat: SchurianCategory) -> Grading:
    """Grading from --grading, or the trivial grading"""
    if args.grading is None:
        return GradingService.trivial_grading(cat)
    return FileService.load_grading(args.grading, cat)


def _words(degrees) -> dict:
    return {name: word_to_strings(word) for name, word in degrees.items()}


def cmd_check(args: Namespace):
    try:
        cat = load_category(args)
        violations = GradingService.check_grading(cat, _grading(args, cat))
        report = GradingCheckReport(
            valid=not violations,
            violations=[ViolationEntry(kind=v.kind, message=v.message, morphisms=list(v.morphisms)) for v in violations],
        )
        return report, 0 if report.valid else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error checking grading: {e}")
        raise InternalError(f"Failed to check grading: {str(e)}")


def cmd_connected(args: Namespace):
    """Loop degrees at the base and whether they generate the group"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        grading = GradingService.require_grading(cat, _grading(args, cat))
        loops = GradingService.loop_degrees(cat, grading, base)
        connected = GradingService.is_connected_grading(cat, grading, base)
        report = ConnectedGradingReport(
            base=base,
            connected=connected,
            loop_degrees={name: grading.group.element_to_json(d) for name, d in loops.items()},
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error deciding grading connectivity: {e}")
        raise InternalError(f"Failed to decide grading connectivity: {str(e)}")


def cmd_universal(args: Namespace):
    """Universal grading by the fundamental group, with tree connectors"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        cw = CwService.build_cw(cat)
        universal = GradingService.universal_grading(cw, base)
        pres = universal.group.presentation
        report = UniversalGradingReport(
            base=base,
            connectors=universal.metadata["connectors"],
            generators=list(pres.generators),
            relators=[word_to_strings(r) for r in pres.relators],
            degrees=_words(universal.degrees),
            connector_walks={x: walk_strings(w) for x, w in universal.connectors.walks.items()},
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error building universal grading: {e}")
        raise InternalError(f"Failed to build universal grading: {str(e)}")


def cmd_quotient(args: Namespace):
    """Group map from the fundamental group onto a connected grading group"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        grading = GradingService.require_grading(cat, _grading(args, cat))
        phi = GradingService.quotient_morphism(cat, grading, base)
        report = QuotientReport(
            base=base,
            images={g: grading.group.element_to_json(v) for g, v in phi.images.items()},
            relators_trivial=phi.relators_trivial,
            surjective=phi.surjective,
            edgewise=phi.edgewise,
            literal=phi.literal,
            ok=phi.ok,
        )
        return report, 0 if phi.ok else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error building quotient morphism: {e}")
        raise InternalError(f"Failed to build quotient morphism: {str(e)}")


def cmd_smash(args: Namespace):
    """Smash product covering and its connected components"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        grading = _grading(args, cat)
        smash = GradingService.smash_product(cat, grading)
        components = CategoryService.components(smash.category)
        grading_connected = CategoryService.is_connected(cat) and \
            GradingService.is_connected_grading(cat, grading, base)
        report = SmashReport(
            objects=len(smash.category.objects),
            homs=len(smash.category.homs),
            components=len(components),
            connected=len(components) == 1,
            grading_connected=grading_connected,
            category=FileService.emit_category_file(smash.category),
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error building smash product: {e}")
        raise InternalError(f"Failed to build smash product: {str(e)}")


def cmd_conjugate(args: Namespace):
    """Twist a grading by a conjugator, checking the smash isomorphism for finite groups"""
    try:
        cat = load_category(args)
        if args.conjugator is None:
            raise MalformedInputError("grading conjugate needs --conjugator FILE")
        grading = GradingService.require_grading(cat, _grading(args, cat))
        a = FileService.load_conjugator(args.conjugator, cat, grading.group)
        twisted = GradingService.conjugate_grading(cat, grading, a)
        valid = not GradingService.check_grading(cat, twisted)
        witness = None
        if grading.group.is_finite:
            w = GradingService.smash_iso_witness(cat, grading, a)
            witness = WitnessReport(
                verified=w.verified,
                bijective=w.bijective,
                preserves_homs=w.preserves_homs,
                preserves_constants=w.preserves_constants,
                commutes_with_projections=w.commutes_with_projections,
                object_map=dict(w.object_map),
            )
        report = ConjugateReport(grading=FileService.emit_grading(twisted), valid=valid, witness=witness)
        return report, 0 if valid and (witness is None or witness.verified) else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error conjugating grading: {e}")
        raise InternalError(f"Failed to conjugate grading: {str(e)}")


def cmd_zgrading(args: Namespace):
    """Z_{X,u} from the connectors of X, and its conjugator to the tree-connector grading"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        grading = GradingService.require_grading(cat, _grading(args, cat))
        connectors = GradingService.connector_walks(cat, grading, base)
        cw = CwService.build_cw(cat)
        pres = PresentationService.pi1_presentation(cw, base)
        z = GradingService.z_grading(cw, base, connectors, pres)
        conjugator = GradingService.connector_conjugator(cw, ConnectorSet(base, dict(pres.tree.paths)), connectors)
        report = ZGradingReport(
            base=base,
            degrees=_words(z.degrees),
            connector_walks={x: walk_strings(w) for x, w in connectors.walks.items()},
            conjugator=_words(conjugator.values),
            conjugator_verified=conjugator.verified,
        )
        return report, 0 if conjugator.verified else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error building grading from connectors: {e}")
        raise InternalError(f"Failed to build grading from connectors: {str(e)}")


_ACTIONS = {
    "check": (cmd_check, "Check the grading law over nonzero composites"),
    "connected": (cmd_connected, "Decide whether a grading is connected"),
    "universal": (cmd_universal, "Universal grading by the fundamental group"),
    "quotient": (cmd_quotient, "Quotient map from the universal grading"),
    "smash": (cmd_smash, "Smash product covering of a finite grading"),
    "conjugate": (cmd_conjugate, "Conjugate a grading by one group element per object"),
    "zgrading": (cmd_zgrading, "Universal grading built from the grading's own connectors"),
}


def register(sub) -> None:
    parser = sub.add_parser("grading", help="Gradings, coverings and the universal grading")
    actions = parser.add_subparsers(dest="action", required=True)
    for name, (handler, help_text) in _ACTIONS.items():
        p = actions.add_parser(name, help=help_text)
        add_input_arguments(p)
        add_base_argument(p)
        p.add_argument("--grading", default=None, help="Grading file (default: trivial grading)")
        if name == "conjugate":
            p.add_argument("--conjugator", default=None, help="Conjugator file: one group element per object")
        p.set_defaults(func=handler)
