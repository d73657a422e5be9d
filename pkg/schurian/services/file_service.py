import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from schurian.config import settings
from schurian.exceptions import InvalidCategoryError, MalformedInputError, UnsupportedGroupError
from schurian.models import (
    AbelianGroupSpec,
    CategoryFile,
    CompositionEntry,
    ConjugatorFile,
    FieldSpec,
    FieldType,
    FiniteGroupSpec,
    GradingFile,
    GroupDescriptor,
    HomEntry,
)
from schurian.services.category_service import CategoryService, Identity, SchurianCategory
from schurian.services.exactalg import Field
from schurian.services.grading_service import FgAbelianGroup, FiniteGroup, Grading, GradingGroup

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class FileService:
    """Reading and writing the JSON interchange formats"""

    @staticmethod
    def load_model(text: str, model: Type[ModelT], what: str) -> ModelT:
        """Parse JSON text into a pydantic model, reporting positions of syntax errors"""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"Invalid JSON in {what} at line {e.lineno}, column {e.colno}: {e.msg}")
        try:
            return model.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise MalformedInputError(f"Invalid {what}: {first['msg']}" + (f" at {location}" if location else ""))

    @staticmethod
    def read_text(path: str) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise MalformedInputError(f"Cannot read {path}: {e.strerror}")

    @staticmethod
    def field_of(spec: Optional[FieldSpec]) -> Field:
        if spec is None:
            return Field.parse(settings.default_field)
        return Field(0) if spec.type == FieldType.RATIONAL else Field(spec.p)

    @staticmethod
    def category_from_model(
        model: CategoryFile, strict: Optional[bool] = None, validate: Optional[bool] = None
    ) -> SchurianCategory:
        """Build and (unless disabled) validate a category from its file model.

        Args:
            model: Parsed CategoryFile
            strict: Require every composable pair to be listed (defaults to settings.strict_compositions)
            validate: Run the validator (defaults to settings.validate_on_load)

        Returns:
            SchurianCategory
        """
        strict = settings.strict_compositions if strict is None else strict
        validate = settings.validate_on_load if validate is None else validate
        field = FileService.field_of(model.field)
        homs = {h.name: h for h in model.homs}
        pairs = {(h.source, h.target): h.name for h in model.homs}

        compositions: Dict = {}
        for entry in model.compositions:
            g, f = homs[entry.g], homs[entry.f]
            if g.source != f.target:
                raise MalformedInputError(f"Composition ({entry.g}, {entry.f}): {entry.g} does not start where {entry.f} ends")
            if (entry.g, entry.f) in compositions:
                raise MalformedInputError(f"Composition ({entry.g}, {entry.f}) is listed twice")
            if entry.result != "zero":
                if f.source == g.target:
                    expected = "identity"
                elif (f.source, g.target) in pairs:
                    expected = pairs[(f.source, g.target)]
                else:
                    raise MalformedInputError(
                        f"Composition ({entry.g}, {entry.f}) is nonzero but there is no morphism "
                        f"from {f.source} to {g.target} to land on"
                    )
                if entry.result != expected:
                    raise MalformedInputError(
                        f"Composition ({entry.g}, {entry.f}) should land on {expected}, not {entry.result}"
                    )
            value = field(entry.scalar)
            if not value and entry.result != "zero":
                raise MalformedInputError(f"Composition ({entry.g}, {entry.f}): scalar {entry.scalar} vanishes in {field.label}")
            compositions[(entry.g, entry.f)] = value

        if strict:
            missing = [
                (g.name, f.name)
                for g in model.homs for f in model.homs
                if g.source == f.target and (g.name, f.name) not in compositions
            ]
            if missing:
                raise MalformedInputError(f"Strict mode: {len(missing)} composable pairs not listed, first {missing[0]}")

        cat = CategoryService.build_category(
            field,
            model.objects,
            [(h.name, h.source, h.target) for h in model.homs],
            compositions,
            model.metadata,
        )
        if validate:
            violations = CategoryService.validate(cat)
            if violations:
                for v in violations[:10]:
                    logger.warning(f"Validation: {v.message}")
                raise InvalidCategoryError(f"Category has {len(violations)} violations", violations)
        return cat

    @staticmethod
    def parse_category_text(text: str, strict: Optional[bool] = None, validate: Optional[bool] = None) -> SchurianCategory:
        model = FileService.load_model(text, CategoryFile, "category file")
        return FileService.category_from_model(model, strict, validate)

    @staticmethod
    def parse_category_file(path: str, strict: Optional[bool] = None, validate: Optional[bool] = None) -> SchurianCategory:
        """Read, parse and validate a category file"""
        cat = FileService.parse_category_text(FileService.read_text(path), strict, validate)
        logger.info(f"Loaded category from {path}: {len(cat.objects)} objects, {len(cat.homs)} morphisms")
        return cat

    @staticmethod
    def emit_category_file(cat: SchurianCategory) -> CategoryFile:
        """File model listing every composable pair, zero composites included"""
        field = cat.field
        spec = FieldSpec() if field.characteristic == 0 else FieldSpec(type=FieldType.GF, p=field.characteristic)
        compositions = []
        for g, f in sorted(cat.composable_pairs(), key=lambda gf: (cat.object_index[gf[1].source], gf[1].name, gf[0].name)):
            composite = CategoryService.compose(cat, g.name, f.name)
            if composite.is_zero:
                result = "zero"
            elif isinstance(composite.result, Identity):
                result = "identity"
            else:
                result = composite.result
            compositions.append(CompositionEntry(g=g.name, f=f.name, result=result, scalar=field.to_string(composite.scalar)))
        return CategoryFile(
            field=spec,
            objects=list(cat.objects),
            homs=[HomEntry(source=h.source, target=h.target, name=h.name) for h in cat.homs],
            compositions=compositions,
            metadata=_json_safe(dict(cat.metadata)),
        )

    @staticmethod
    def group_from_descriptor(descriptor: GroupDescriptor) -> GradingGroup:
        if descriptor.finite is not None:
            return FiniteGroup(descriptor.finite.elements, descriptor.finite.table)
        return FgAbelianGroup(descriptor.abelian.rank, descriptor.abelian.torsion)

    @staticmethod
    def grading_from_model(model: GradingFile, cat: SchurianCategory) -> Grading:
        group = FileService.group_from_descriptor(model.group)
        unknown = sorted(set(model.degrees) - set(cat.hom_by_name))
        if unknown:
            raise MalformedInputError(f"Grading assigns degrees to undeclared morphisms: {unknown}")
        missing = [h.name for h in cat.homs if h.name not in model.degrees]
        if missing:
            raise MalformedInputError(f"Grading assigns no degree to: {missing}")
        degrees = {h.name: group.parse_element(model.degrees[h.name]) for h in cat.homs}
        return Grading(group, degrees)

    @staticmethod
    def load_grading(path: str, cat: SchurianCategory) -> Grading:
        """Read a grading file for the given category"""
        model = FileService.load_model(FileService.read_text(path), GradingFile, "grading file")
        return FileService.grading_from_model(model, cat)

    @staticmethod
    def emit_grading(grading: Grading) -> GradingFile:
        group = grading.group
        if isinstance(group, FiniteGroup):
            descriptor = GroupDescriptor(finite=FiniteGroupSpec(elements=group.elements(), table=group.table))
        elif isinstance(group, FgAbelianGroup):
            descriptor = GroupDescriptor(abelian=AbelianGroupSpec(rank=group.rank, torsion=list(group.torsion)))
        else:
            raise UnsupportedGroupError(f"Cannot write a grading by a {group.kind} group to a grading file")
        return GradingFile(
            group=descriptor,
            degrees={name: group.element_to_json(d) for name, d in grading.degrees.items()},
        )

    @staticmethod
    def load_conjugator(path: str, cat: SchurianCategory, group: GradingGroup) -> Dict[str, Any]:
        """Read a conjugator file: one group element per object"""
        model = FileService.load_model(FileService.read_text(path), ConjugatorFile, "conjugator file")
        unknown = sorted(set(model.values) - set(cat.objects))
        if unknown:
            raise MalformedInputError(f"Conjugator names undeclared objects: {unknown}")
        return {x: group.parse_element(model.values[x]) if x in model.values else group.identity for x in cat.objects}


def _json_safe(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# Global service instance
file_service = FileService()
