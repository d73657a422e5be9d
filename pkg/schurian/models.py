from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic.alias_generators import to_camel

from schurian.exceptions import MalformedInputError
from schurian.services.exactalg import Field as GroundField


class FieldType(str, Enum):
    """Ground field kind"""
    RATIONAL = "rational"
    GF = "gf"


class FieldSpec(BaseModel):
    """Field descriptor: {"type": "rational"} or {"type": "gf", "p": 5}"""
    type: FieldType = FieldType.RATIONAL
    p: Optional[int] = None

    @model_validator(mode="after")
    def check_modulus(self):
        if self.type == FieldType.GF and self.p is None:
            raise ValueError("GF field needs a modulus p")
        if self.type == FieldType.RATIONAL and self.p is not None:
            raise ValueError("Rational field takes no modulus")
        return self


class HomEntry(BaseModel):
    """Basis morphism declaration"""
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(..., alias="from")
    target: str = Field(..., alias="to")
    name: str = Field(..., min_length=1)


def _exact_scalar(value: Any) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValueError(f"Scalar {value!r} must be an integer or an exact string such as \"3/4\"")
    text = str(value).strip()
    try:
        GroundField()(text)
    except MalformedInputError as e:
        raise ValueError(e.detail)
    return text


class CompositionEntry(BaseModel):
    """Structure constant: g∘f = scalar · result"""
    g: str
    f: str
    result: str
    scalar: str = "1"

    @field_validator("scalar", mode="before")
    @classmethod
    def check_scalar(cls, value):
        return _exact_scalar(value)

    @model_validator(mode="after")
    def check_zero(self):
        is_zero = not GroundField()(self.scalar)
        if is_zero != (self.result == "zero"):
            raise ValueError(f"Composition ({self.g}, {self.f}): scalar 0 must go with result \"zero\" and only with it")
        return self


class CategoryFile(BaseModel):
    """Schurian category interchange format"""
    model_config = ConfigDict(populate_by_name=True)

    field: Optional[FieldSpec] = None
    objects: List[str] = Field(..., min_length=1)
    homs: List[HomEntry] = []
    compositions: List[CompositionEntry] = []
    metadata: Dict[str, Any] = {}

    @model_validator(mode="after")
    def check_names(self):
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("Object names are not unique")
        names = [h.name for h in self.homs]
        if len(set(names)) != len(names):
            raise ValueError("Morphism names are not unique")
        objects = set(self.objects)
        for h in self.homs:
            if h.source not in objects or h.target not in objects:
                raise ValueError(f"Morphism {h.name} references an undeclared object")
        declared = set(names)
        for c in self.compositions:
            for name in (c.g, c.f):
                if name not in declared:
                    raise ValueError(f"Composition ({c.g}, {c.f}) references undeclared morphism {name}")
            if c.result not in ("zero", "identity") and c.result not in declared:
                raise ValueError(f"Composition ({c.g}, {c.f}) has undeclared result {c.result}")
        return self


class FiniteGroupSpec(BaseModel):
    """Finite group by multiplication table"""
    elements: List[str] = Field(..., min_length=1)
    table: List[List[str]]


class AbelianGroupSpec(BaseModel):
    """Z^rank ⊕ Z/t_1 ⊕ ..."""
    rank: int = Field(0, ge=0)
    torsion: List[int] = []


class GroupDescriptor(BaseModel):
    """Exactly one of finite or abelian"""
    finite: Optional[FiniteGroupSpec] = None
    abelian: Optional[AbelianGroupSpec] = None

    @model_validator(mode="after")
    def check_one(self):
        if (self.finite is None) == (self.abelian is None):
            raise ValueError("Group descriptor needs exactly one of 'finite' or 'abelian'")
        return self


class GradingFile(BaseModel):
    """Grading interchange format"""
    group: GroupDescriptor
    degrees: Dict[str, Any]


class ConjugatorFile(BaseModel):
    """Group element per object"""
    values: Dict[str, Any]


class ReportModel(BaseModel):
    """Base for JSON reports (camelCase keys)"""
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)


class ViolationEntry(ReportModel):
    """One validation finding"""
    kind: str
    message: str
    morphisms: List[str] = []


class ValidationReport(ReportModel):
    """Output of validate"""
    valid: bool
    objects: int
    homs: int
    violations: List[ViolationEntry] = []


class CellEntry(ReportModel):
    """2-cell with its boundary walk (traversal order)"""
    kind: str
    pair: List[str]
    boundary: List[str]


class AbelianReport(ReportModel):
    """Abelian invariants"""
    rank: int
    torsion: List[int] = []


class CwReport(ReportModel):
    """Output of cw --emit json"""
    vertices: int
    edges: int
    two_cells: int
    triangles: int
    bigons: int
    euler: int
    homology: Optional[AbelianReport] = None
    cells: List[CellEntry] = []


class Pi1Report(ReportModel):
    """Output of pi1"""
    base: str
    tree: List[str]
    generators: int
    relators: int
    generator_names: List[str]
    relator_words: List[List[str]]
    abelianization: AbelianReport
    simplified: bool = False


class AbelianizationReport(ReportModel):
    """Output of abelian"""
    base: str
    abelianization: AbelianReport
    cellular: Optional[AbelianReport] = None
    agree: Optional[bool] = None


class CharactersReport(ReportModel):
    """Output of characters"""
    field: str
    base: str
    dimension: int
    generators: List[str]
    basis: List[Dict[str, str]]


class Hh1Report(ReportModel):
    """Output of hh1"""
    field: str
    dim_hh1: int = Field(..., alias="dimHH1")
    dim_derivations: int
    dim_inner: int
    dim_cellular: int
    representatives: List[Dict[str, str]]


class HurewiczReport(ReportModel):
    """Output of hurewicz"""
    field: str
    base: str
    dim_characters: int
    dim_hh1: int = Field(..., alias="dimHH1")
    dim_cellular: int
    rank: int
    verdict: str
    matrix: List[List[str]]


class DerivationCharacterEntry(ReportModel):
    """HH1 representative and the character it comes from"""
    derivation: Dict[str, str]
    character: Dict[str, str]


class DerivationCharacterReport(ReportModel):
    """Output of derivation-character"""
    field: str
    base: str
    entries: List[DerivationCharacterEntry]


class GradingCheckReport(ReportModel):
    """Output of grading check"""
    valid: bool
    violations: List[ViolationEntry] = []


class ConnectedGradingReport(ReportModel):
    """Output of grading connected"""
    base: str
    connected: bool
    loop_degrees: Dict[str, Any]


class UniversalGradingReport(ReportModel):
    """Output of grading universal"""
    base: str
    connectors: str
    generators: List[str]
    relators: List[List[str]]
    degrees: Dict[str, List[str]]
    connector_walks: Dict[str, List[str]]


class QuotientReport(ReportModel):
    """Output of grading quotient"""
    base: str
    images: Dict[str, Any]
    relators_trivial: bool
    surjective: bool
    edgewise: bool
    literal: Optional[bool] = None
    ok: bool


class SmashReport(ReportModel):
    """Output of grading smash"""
    objects: int
    homs: int
    components: int
    connected: bool
    grading_connected: bool
    category: CategoryFile


class WitnessReport(ReportModel):
    """Isomorphism C#(aX) -> C#X"""
    verified: bool
    bijective: bool
    preserves_homs: bool
    preserves_constants: bool
    commutes_with_projections: bool
    object_map: Dict[str, str]


class ConjugateReport(ReportModel):
    """Output of grading conjugate"""
    grading: GradingFile
    valid: bool
    witness: Optional[WitnessReport] = None


class ZGradingReport(ReportModel):
    """Output of grading zgrading"""
    base: str
    degrees: Dict[str, List[str]]
    connector_walks: Dict[str, List[str]]
    conjugator: Dict[str, List[str]]
    conjugator_verified: bool


class ErrorReport(BaseModel):
    """Error body"""
    detail: str
    violations: Optional[List[ViolationEntry]] = None
