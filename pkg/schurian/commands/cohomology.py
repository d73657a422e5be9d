import logging
from argparse import ArgumentParser, Namespace

from schurian.commands.common import (
    add_base_argument,
    add_field_argument,
    add_input_arguments,
    load_category,
    resolve_base,
    resolve_field,
    scalar_map,
)
from schurian.exceptions import InternalError, SchurianError
from schurian.models import (
    CharactersReport,
    DerivationCharacterEntry,
    DerivationCharacterReport,
    Hh1Report,
    HurewiczReport,
)
from schurian.services.cw_service import CwService
from schurian.services.hochschild_service import ISOMORPHISM, HochschildService
from schurian.services.presentation_service import PresentationService

logger = logging.getLogger(__name__)


def cmd_characters(args: Namespace):
    """Basis of the additive characters of the fundamental group"""
    try:
        cat = load_category(args)
        field = resolve_field(args, cat)
        base = resolve_base(args, cat)
        pres = PresentationService.pi1_presentation(CwService.build_cw(cat), base)
        basis = PresentationService.character_space(pres, field)
        report = CharactersReport(
            field=field.label,
            base=base,
            dimension=len(basis),
            generators=list(pres.generators),
            basis=[scalar_map(field, chi.generators, chi.values) for chi in basis],
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error computing characters: {e}")
        raise InternalError(f"Failed to compute characters: {str(e)}")


def cmd_hh1(args: Namespace):
    """First Hochschild-Mitchell cohomology with chosen representatives"""
    try:
        cat = load_category(args)
        field = resolve_field(args, cat)
        space = HochschildService.hh1(cat, field)
        report = Hh1Report(
            field=field.label,
            dim_hh1=space.dimension,
            dim_derivations=len(space.derivation_basis),
            dim_inner=len(space.inner_basis),
            dim_cellular=CwService.cohomology_dim_h1(CwService.build_cw(cat), field),
            representatives=[scalar_map(field, d.homs, d.values) for d in space.representatives],
        )
        return report, 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error computing HH1: {e}")
        raise InternalError(f"Failed to compute HH1: {str(e)}")


def cmd_hurewicz(args: Namespace):
    """Compare characters with HH1 through the Hurewicz map"""
    try:
        cat = load_category(args)
        field = resolve_field(args, cat)
        base = resolve_base(args, cat)
        result = HochschildService.verify_hurewicz_iso(cat, base, field)
        report = HurewiczReport(
            field=field.label,
            base=base,
            dim_characters=result.dim_characters,
            dim_hh1=result.dim_hh1,
            dim_cellular=result.dim_cellular,
            rank=result.rank,
            verdict=result.verdict,
            matrix=[[field.to_string(v) for v in row] for row in result.image_matrix],
        )
        return report, 0 if result.verdict == ISOMORPHISM else 1
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error verifying Hurewicz map: {e}")
        raise InternalError(f"Failed to verify Hurewicz map: {str(e)}")


def cmd_derivation_character(args: Namespace):
    """Character behind every HH1 representative"""
    try:
        cat = load_category(args)
        field = resolve_field(args, cat)
        base = resolve_base(args, cat)
        space = HochschildService.hh1(cat, field)
        entries = []
        for d in space.representatives:
            chi = HochschildService.character_of_derivation(cat, d, base)
            entries.append(DerivationCharacterEntry(
                derivation=scalar_map(field, d.homs, d.values),
                character=scalar_map(field, chi.generators, chi.values),
            ))
        return DerivationCharacterReport(field=field.label, base=base, entries=entries), 0
    except SchurianError:
        raise
    except Exception as e:
        logger.error(f"Error computing derivation characters: {e}")
        raise InternalError(f"Failed to compute derivation characters: {str(e)}")


def _analysis_parser(sub, name: str, help_text: str, with_base: bool = True) -> ArgumentParser:
    parser = sub.add_parser(name, help=help_text)
    add_input_arguments(parser)
    add_field_argument(parser)
    if with_base:
        add_base_argument(parser)
    return parser


def register(sub) -> None:
    _analysis_parser(sub, "characters", "Additive characters of the fundamental group").set_defaults(func=cmd_characters)
    _analysis_parser(sub, "hh1", "First Hochschild-Mitchell cohomology", with_base=False).set_defaults(func=cmd_hh1)
    _analysis_parser(sub, "hurewicz", "Check the Hurewicz isomorphism").set_defaults(func=cmd_hurewicz)
    _analysis_parser(
        sub, "derivation-character", "Character of each HH1 representative"
    ).set_defaults(func=cmd_derivation_character)
