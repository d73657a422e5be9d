import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from schurian.exceptions import DisconnectedError, MalformedInputError, VerificationError
from schurian.services.category_service import CategoryService, Identity, SchurianCategory
from schurian.services.cw_service import CwService
from schurian.services.exactalg import ExactAlgebraService, Field
from schurian.services.grading_service import GradingService
from schurian.services.presentation_service import Character, PresentationService

logger = logging.getLogger(__name__)

ISOMORPHISM = "isomorphism"
NOT_ISOMORPHISM = "not-isomorphism"


@dataclass(frozen=True)
class Derivation:
    """d(e) = λ_e·e on every basis morphism; identities go to 0"""

    field: Field
    homs: Tuple[str, ...]
    values: Tuple

    def value(self, hom: str):
        return self.values[self.homs.index(hom)]

    def as_dict(self) -> Dict[str, object]:
        return dict(zip(self.homs, self.values))

    def __sub__(self, other: "Derivation") -> "Derivation":
        _require_same(self, other)
        return Derivation(self.field, self.homs, tuple(a - b for a, b in zip(self.values, other.values)))

    @property
    def is_zero(self) -> bool:
        return not any(self.values)


def _require_same(d1: Derivation, d2: Derivation) -> None:
    if d1.field != d2.field or d1.homs != d2.homs:
        raise MalformedInputError("Derivations belong to different categories or fields")


@dataclass(frozen=True)
class Hh1Space:
    """Derivations modulo inner derivations"""

    field: Field
    derivation_basis: Tuple[Derivation, ...]
    inner_basis: Tuple[Derivation, ...]
    representatives: Tuple[Derivation, ...]

    @property
    def dimension(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class HurewiczVerification:
    """Hom(π1, k+) against HH1 and the Hurewicz map between them"""

    field: Field
    basepoint: str
    dim_characters: int
    dim_hh1: int
    dim_cellular: int
    image_matrix: Tuple[Tuple, ...]
    rank: int
    characters: Tuple[Character, ...]
    images: Tuple[Derivation, ...]

    @property
    def verdict(self) -> str:
        if self.dim_characters == self.dim_hh1 == self.rank:
            return ISOMORPHISM
        return NOT_ISOMORPHISM


class HochschildService:
    """First Hochschild-Mitchell cohomology of Schurian categories"""

    @staticmethod
    def derivation_constraints(cat: SchurianCategory, field: Optional[Field] = None):
        """Constraint matrix: one column per basis morphism, one row per nonzero composite.

        Triangle rows read λ_gf − λ_g − λ_f = 0, bigon rows λ_g + λ_f = 0.
        """
        field = field or cat.field
        column = {h.name: j for j, h in enumerate(cat.homs)}
        rows: Dict[int, Dict[int, int]] = {}
        for g, f in cat.composable_pairs():
            composite = CategoryService.compose(cat, g.name, f.name)
            if composite.is_zero:
                continue
            row: Dict[int, int] = {}
            if isinstance(composite.result, Identity):
                row[column[g.name]] = 1
                row[column[f.name]] = row.get(column[f.name], 0) + 1
            else:
                row[column[composite.result]] = 1
                row[column[g.name]] = -1
                row[column[f.name]] = -1
            rows[len(rows)] = row
        return ExactAlgebraService.sparse_field_matrix(rows, (len(rows), len(cat.homs)), field)

    @staticmethod
    def _derivation(cat: SchurianCategory, field: Field, vector) -> Derivation:
        return Derivation(field, tuple(h.name for h in cat.homs), tuple(vector))

    @staticmethod
    def derivation_space(cat: SchurianCategory, field: Optional[Field] = None) -> List[Derivation]:
        """Basis of the derivations of cat over the field"""
        field = field or cat.field
        CategoryService.require_valid(cat)
        basis = ExactAlgebraService.nullspace_basis(HochschildService.derivation_constraints(cat, field))
        logger.debug(f"Derivation space over {field.label}: dimension {len(basis)}")
        return [HochschildService._derivation(cat, field, v) for v in basis]

    @staticmethod
    def inner_derivation(cat: SchurianCategory, a: Mapping[str, object], field: Optional[Field] = None) -> Derivation:
        """d_a with λ(e) = a_t(e) − a_s(e)"""
        field = field or cat.field
        missing = [x for x in cat.objects if x not in a]
        if missing:
            raise MalformedInputError(f"Inner derivation needs a scalar at {missing}")
        values = {x: field(v) for x, v in a.items()}
        return HochschildService._derivation(cat, field, [values[h.target] - values[h.source] for h in cat.homs])

    @staticmethod
    def satisfies_constraints(cat: SchurianCategory, d: Derivation) -> bool:
        constraints = HochschildService.derivation_constraints(cat, d.field)
        for row in constraints.to_sdm().values():
            total = d.field.zero
            for j, c in row.items():
                total += c * d.values[j]
            if total:
                return False
        return True

    @staticmethod
    def _incidence(cat: SchurianCategory, field: Field):
        """Edge x object matrix of the map a -> d_a"""
        index = cat.object_index
        rows = {j: {index[h.target]: 1, index[h.source]: -1} for j, h in enumerate(cat.homs)}
        return ExactAlgebraService.sparse_field_matrix(rows, (len(cat.homs), len(cat.objects)), field)

    @staticmethod
    def is_inner(cat: SchurianCategory, d: Derivation) -> bool:
        solution = ExactAlgebraService.solve_linear(HochschildService._incidence(cat, d.field), list(d.values))
        return solution is not None

    @staticmethod
    def _require_connected(cat: SchurianCategory) -> None:
        if not CategoryService.is_connected(cat):
            raise DisconnectedError("HH1 is only computed for connected categories")

    @staticmethod
    def _independent(field: Field, start: List[List], candidates: List[List], width: int) -> List[int]:
        """Indices of candidates that enlarge the span of start, in order"""
        kept, current = [], [list(v) for v in start]
        rank = ExactAlgebraService.rank(ExactAlgebraService.field_matrix(current, field, cols=width))
        for i, v in enumerate(candidates):
            trial = ExactAlgebraService.rank(ExactAlgebraService.field_matrix(current + [list(v)], field, cols=width))
            if trial > rank:
                kept.append(i)
                current.append(list(v))
                rank = trial
        return kept

    @staticmethod
    def hh1(cat: SchurianCategory, field: Optional[Field] = None) -> Hh1Space:
        """Derivations modulo inner ones, with coset representatives picked in basis order"""
        field = field or cat.field
        HochschildService._require_connected(cat)
        derivations = HochschildService.derivation_space(cat, field)
        indicators = [
            HochschildService.inner_derivation(cat, {y: int(y == x) for y in cat.objects}, field)
            for x in cat.objects
        ]
        width = len(cat.homs)
        inner_idx = HochschildService._independent(field, [], [list(d.values) for d in indicators], width)
        inner = [indicators[i] for i in inner_idx]
        rep_idx = HochschildService._independent(
            field, [list(d.values) for d in inner], [list(d.values) for d in derivations], width
        )
        reps = [derivations[i] for i in rep_idx]
        expected = len(derivations) - (len(cat.objects) - 1)
        if len(reps) != expected or len(inner) != len(cat.objects) - 1:
            raise VerificationError(
                f"HH1 dimension {len(reps)} disagrees with nullity − (objects − 1) = {expected}"
            )
        logger.info(f"HH1 over {field.label}: dimension {len(reps)}")
        return Hh1Space(field, tuple(derivations), tuple(inner), tuple(reps))

    @staticmethod
    def coset_coordinates(space: Hh1Space, d: Derivation) -> List:
        """Coordinates of the class of d against the chosen representatives"""
        vectors = [r.values for r in space.representatives] + [i.values for i in space.inner_basis]
        if not vectors:
            if not d.is_zero:
                raise MalformedInputError("Nonzero derivation in a category without morphisms")
            return []
        columns = [[v[j] for v in vectors] for j in range(len(d.values))]
        m = ExactAlgebraService.field_matrix(columns, space.field, cols=len(vectors))
        solution = ExactAlgebraService.solve_linear(m, list(d.values))
        if solution is None:
            raise MalformedInputError("Vector is not a derivation")
        return solution[: space.dimension]

    @staticmethod
    def lie_bracket(d1: Derivation, d2: Derivation) -> Derivation:
        """[d1, d2] = d1 d2 − d2 d1, computed on each one-dimensional hom space"""
        _require_same(d1, d2)
        return Derivation(d1.field, d1.homs, tuple(a * b - b * a for a, b in zip(d1.values, d2.values)))

    @staticmethod
    def hurewicz(cat: SchurianCategory, character: Character, basepoint: str, field: Optional[Field] = None) -> Derivation:
        """Eulerian derivation λ(e) = χ(deg e) for the universal grading"""
        field = field or character.field
        cw = CwService.build_cw(cat)
        universal = GradingService.universal_grading(cw, basepoint)
        if tuple(universal.group.presentation.generators) != tuple(character.generators):
            raise MalformedInputError("Character is not defined on this presentation of the fundamental group")
        d = HochschildService._derivation(
            cat, field, [character.evaluate(universal.degrees[h.name]) for h in cat.homs]
        )
        if not HochschildService.satisfies_constraints(cat, d):
            raise VerificationError("Hurewicz image violates the Leibniz constraints")
        return d

    @staticmethod
    def character_of_derivation(cat: SchurianCategory, d: Derivation, basepoint: str) -> Character:
        """χ(gen_e) = signed sum of λ along the tree loop of e"""
        cw = CwService.build_cw(cat)
        pres = PresentationService.pi1_presentation(cw, basepoint)
        lam = d.as_dict()
        values = []
        for g in pres.generators:
            total = d.field.zero
            for name, sign in PresentationService.edge_loop(cw, pres.tree, g).steps:
                total += lam[name] if sign == 1 else -lam[name]
            values.append(total)
        character = Character(d.field, pres.generators, tuple(values))
        if any(character.evaluate(r) for r in pres.relators):
            raise VerificationError("Character of a derivation does not kill the relators")
        if not HochschildService.is_inner(cat, HochschildService.hurewicz(cat, character, basepoint) - d):
            raise VerificationError("Hurewicz image of the character differs from the derivation by a non-inner term")
        return character

    @staticmethod
    def verify_hurewicz_iso(cat: SchurianCategory, basepoint: str, field: Optional[Field] = None) -> HurewiczVerification:
        """Compare dim Hom(π1, k+) with dim HH1 and the rank of the Hurewicz image"""
        field = field or cat.field
        HochschildService._require_connected(cat)
        cat.require_object(basepoint)
        cw = CwService.build_cw(cat)
        pres = PresentationService.pi1_presentation(cw, basepoint)
        characters = PresentationService.character_space(pres, field)
        space = HochschildService.hh1(cat, field)
        images = [HochschildService.hurewicz(cat, chi, basepoint, field) for chi in characters]
        matrix = [HochschildService.coset_coordinates(space, d) for d in images]
        rank = ExactAlgebraService.rank(ExactAlgebraService.field_matrix(matrix, field, cols=space.dimension)) \
            if matrix and space.dimension else 0
        result = HurewiczVerification(
            field=field,
            basepoint=basepoint,
            dim_characters=len(characters),
            dim_hh1=space.dimension,
            dim_cellular=CwService.cohomology_dim_h1(cw, field),
            image_matrix=tuple(tuple(row) for row in matrix),
            rank=rank,
            characters=tuple(characters),
            images=tuple(images),
        )
        logger.info(
            f"Hurewicz over {field.label}: characters {result.dim_characters}, HH1 {result.dim_hh1}, "
            f"rank {rank}, verdict {result.verdict}"
        )
        return result


# Global service instance
hochschild_service = HochschildService()
