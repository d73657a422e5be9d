import logging
from argparse import Namespace

from schurian.commands.common import add_base_argument, add_input_arguments, load_category, resolve_base, walk_strings
from schurian.exceptions import InternalError, SchurianError
from schurian.models import AbelianizationReport, AbelianReport, CellEntry, CwReport, Pi1Report
from schurian.services.cw_service import BIGON, TRIANGLE, CwService
from schurian.services.presentation_service import PresentationService, word_to_strings

logger = logging.getLogger(__name__)


def _abelian_report(invariants) -> AbelianReport:
    return AbelianReport(rank=invariants.free_rank, torsion=list(invariants.torsion))


def cmd_cw(args: Namespace):
    """Cell counts and cells of CW(C), or DOT text of its 1-skeleton"""
    try:
        cat = load_category(args)
        cw = CwService.build_cw(cat)
        if args.emit == "dot":
            return CwService.emit_dot(cw), 0
        v, e, f = cw.counts()
        homology = _abelian_report(CwService.cellular_homology_h1(cw)) if CwService.is_connected(cw) else None
        report = CwReport(
            vertices=v,
            edges=e,
            two_cells=f,
            triangles=sum(1 for c in cw.two_cells if c.kind == TRIANGLE),
            bigons=sum(1 for c in cw.two_cells if c.kind == BIGON),
            euler=CwService.euler_characteristic(cw),
            homology=homology,
            cells=[CellEntry(kind=c.kind, pair=list(c.pair), boundary=walk_strings(c.boundary)) for c in cw.two_cells],
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error building CW complex: {e}")
        raise InternalError(f"Failed to build CW complex: {str(e)}")


def cmd_pi1(args: Namespace):
    """Spanning-tree presentation of the fundamental group"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        cw = CwService.build_cw(cat)
        pres = PresentationService.pi1_presentation(cw, base)
        shown = PresentationService.simplify_presentation(pres) if args.simplify else pres
        report = Pi1Report(
            base=base,
            tree=list(pres.tree.edges),
            generators=len(shown.generators),
            relators=len(shown.relators),
            generator_names=list(shown.generators),
            relator_words=[word_to_strings(r) for r in shown.relators],
            abelianization=_abelian_report(PresentationService.abelianization(shown)),
            simplified=args.simplify,
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error computing presentation: {e}")
        raise InternalError(f"Failed to compute presentation: {str(e)}")


def cmd_abelian(args: Namespace):
    """Abelianized fundamental group, checked against cellular H1"""
    try:
        cat = load_category(args)
        base = resolve_base(args, cat)
        cw = CwService.build_cw(cat)
        invariants = PresentationService.abelianization(PresentationService.pi1_presentation(cw, base))
        cellular = CwService.cellular_homology_h1(cw)
        agree = invariants == cellular
        report = AbelianizationReport(
            base=base,
            abelianization=_abelian_report(invariants),
            cellular=_abelian_report(cellular),
            agree=agree,
        )
        return report, 0 if agree else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error computing abelianization: {e}")
        raise InternalError(f"Failed to compute abelianization: {str(e)}")


def register(sub) -> None:
    cw = sub.add_parser("cw", help="Build the attached CW complex")
    add_input_arguments(cw)
    cw.add_argument("--emit", choices=["json", "dot"], default="json")
    cw.set_defaults(func=cmd_cw)

    pi1 = sub.add_parser("pi1", help="Present the fundamental group")
    add_input_arguments(pi1)
    add_base_argument(pi1)
    pi1.add_argument("--simplify", action="store_true", help="Apply Tietze simplification")
    pi1.set_defaults(func=cmd_pi1)

    ab = sub.add_parser("abelian", help="Abelian invariants of the fundamental group")
    add_input_arguments(ab)
    add_base_argument(ab)
    ab.set_defaults(func=cmd_abelian)
