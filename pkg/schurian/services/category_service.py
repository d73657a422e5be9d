import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

from schurian.exceptions import (
    CompositionError,
    InvalidCategoryError,
    MalformedInputError,
    UnknownObjectError,
)
from schurian.services.exactalg import Field

logger = logging.getLogger(__name__)


class Hom(NamedTuple):
    """Basis morphism of a one-dimensional hom space"""

    name: str
    source: str
    target: str


class Identity(NamedTuple):
    """Identity morphism of an object"""

    obj: str


Morphism = Union[str, Identity]


class Composite(NamedTuple):
    """compose(g, f) = scalar · result; result is None for a zero composite"""

    scalar: object
    result: Optional[Morphism]

    @property
    def is_zero(self) -> bool:
        return self.result is None


class Violation(NamedTuple):
    """One validation finding"""

    kind: str
    message: str
    morphisms: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Walk:
    """Sequence of virtual morphisms (hom, ±1), stored in traversal order.

    steps[0] is traversed first; a −1 step runs its hom backwards.
    """

    start: str
    steps: Tuple[Tuple[str, int], ...]
    end: str

    @classmethod
    def empty(cls, obj: str) -> "Walk":
        return cls(obj, (), obj)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def then(self, other: "Walk") -> "Walk":
        """self followed by other"""
        if self.end != other.start:
            raise CompositionError(f"Walk ending at {self.end} cannot be followed by a walk from {other.start}")
        return Walk(self.start, self.steps + other.steps, other.end)

    def inverse(self) -> "Walk":
        return Walk(self.end, tuple((name, -sign) for name, sign in reversed(self.steps)), self.start)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class SchurianCategory:
    """Finite Schurian k-category.

    constants maps composable off-diagonal pairs (g, f) with s(g) = t(f) to the
    nonzero scalar c(g, f); absent pairs compose to zero.
    """

    field: Field
    objects: Tuple[str, ...]
    homs: Tuple[Hom, ...]
    constants: Mapping[Tuple[str, str], object]
    metadata: Mapping = field(default_factory=dict, compare=False)

    @cached_property
    def object_index(self) -> Dict[str, int]:
        return {x: i for i, x in enumerate(self.objects)}

    @cached_property
    def hom_by_name(self) -> Dict[str, Hom]:
        return {h.name: h for h in self.homs}

    @cached_property
    def hom_by_pair(self) -> Dict[Tuple[str, str], Hom]:
        """(source, target) -> basis morphism"""
        return {(h.source, h.target): h for h in self.homs}

    @cached_property
    def homs_out(self) -> Dict[str, List[Hom]]:
        out = {x: [] for x in self.objects}
        for h in self.homs:
            out.setdefault(h.source, []).append(h)
        return out

    @cached_property
    def homs_in(self) -> Dict[str, List[Hom]]:
        into = {x: [] for x in self.objects}
        for h in self.homs:
            into.setdefault(h.target, []).append(h)
        return into

    def hom(self, name: str) -> Hom:
        try:
            return self.hom_by_name[name]
        except KeyError:
            raise MalformedInputError(f"Unknown morphism: {name}")

    def require_object(self, obj: str) -> str:
        if obj not in self.object_index:
            raise UnknownObjectError(f"Unknown object: {obj}")
        return obj

    def source(self, m: Morphism) -> str:
        return m.obj if isinstance(m, Identity) else self.hom(m).source

    def target(self, m: Morphism) -> str:
        return m.obj if isinstance(m, Identity) else self.hom(m).target

    def constant(self, g: str, f: str):
        return self.constants.get((g, f), self.field.zero)

    def composable_pairs(self) -> Iterable[Tuple[Hom, Hom]]:
        """Off-diagonal pairs (g, f) with s(g) = t(f), ordered by middle object then names"""
        for y in self.objects:
            for f in self.homs_in[y]:
                for g in self.homs_out[y]:
                    yield g, f

    def walk(self, start: str, steps: Sequence[Tuple[str, int]]) -> Walk:
        """Build a walk from traversal-order steps, checking that consecutive steps meet"""
        here = self.require_object(start)
        for name, sign in steps:
            h = self.hom(name)
            if sign not in (1, -1):
                raise MalformedInputError(f"Walk step sign must be +1 or -1, got {sign}")
            tail, head = (h.source, h.target) if sign == 1 else (h.target, h.source)
            if tail != here:
                raise CompositionError(f"Walk step ({name}, {sign}) starts at {tail}, expected {here}")
            here = head
        return Walk(start, tuple((n, s) for n, s in steps), here)

    def edge_walk(self, name: str, sign: int = 1) -> Walk:
        h = self.hom(name)
        return self.walk(h.source if sign == 1 else h.target, [(name, sign)])


class CategoryService:
    """Validation, composition and constructions on Schurian categories"""

    @staticmethod
    def build_category(
        field: Field,
        objects: Sequence[str],
        homs: Iterable[Tuple[str, str, str]],
        compositions: Mapping[Tuple[str, str], object],
        metadata: Optional[Mapping] = None,
    ) -> SchurianCategory:
        """Build a category from names and exact scalars.

        Args:
            field: Ground field
            objects: Ordered object names
            homs: (name, source, target) triples
            compositions: (g, f) -> scalar, zero scalars allowed
            metadata: Free-form annotations

        Returns:
            SchurianCategory (structural problems raise, axioms are left to validate)
        """
        constants = {}
        for (g, f), scalar in compositions.items():
            value = field(scalar)
            if value:
                constants[(g, f)] = value
        cat = SchurianCategory(
            field=field,
            objects=tuple(objects),
            homs=tuple(Hom(*h) for h in homs),
            constants=constants,
            metadata=dict(metadata or {}),
        )
        structural = CategoryService._structural_violations(cat)
        if structural:
            raise MalformedInputError("; ".join(v.message for v in structural))
        return cat

    @staticmethod
    def _structural_violations(cat: SchurianCategory) -> List[Violation]:
        found = []
        if len(set(cat.objects)) != len(cat.objects):
            found.append(Violation("duplicate-object", "Object names are not unique"))
        names = [h.name for h in cat.homs]
        if len(set(names)) != len(names):
            found.append(Violation("duplicate-hom", "Morphism names are not unique"))
        objects = set(cat.objects)
        seen_pairs = set()
        for h in cat.homs:
            if h.source not in objects or h.target not in objects:
                found.append(Violation("unknown-object", f"Morphism {h.name} references an undeclared object", (h.name,)))
            if h.source == h.target:
                found.append(Violation("diagonal-hom", f"Morphism {h.name} is an endomorphism; endomorphism spaces are spanned by identities", (h.name,)))
            if (h.source, h.target) in seen_pairs:
                found.append(Violation("dimension", f"Second basis morphism {h.name} in a one-dimensional hom space", (h.name,)))
            seen_pairs.add((h.source, h.target))
        for (g, f), value in cat.constants.items():
            if g not in cat.hom_by_name or f not in cat.hom_by_name:
                found.append(Violation("undeclared-hom", f"Composition ({g}, {f}) references an undeclared morphism", (g, f)))
                continue
            if cat.hom_by_name[g].source != cat.hom_by_name[f].target:
                found.append(Violation("not-composable", f"Composition ({g}, {f}) of non-composable morphisms", (g, f)))
            if not cat.field.contains(value):
                found.append(Violation("field", f"Constant c({g}, {f}) is not in {cat.field.label}", (g, f)))
        return found

    @staticmethod
    def compose(cat: SchurianCategory, g: Morphism, f: Morphism) -> Composite:
        """g ∘ f as (scalar, basis morphism | identity | None)"""
        if cat.source(g) != cat.target(f):
            raise CompositionError(f"Cannot compose {g} after {f}: {cat.source(g)} != {cat.target(f)}")
        one = cat.field.one
        if isinstance(f, Identity):
            return Composite(one, g)
        if isinstance(g, Identity):
            return Composite(one, f)
        c = cat.constant(g, f)
        if not c:
            return Composite(cat.field.zero, None)
        x, z = cat.source(f), cat.target(g)
        if x == z:
            return Composite(c, Identity(x))
        target = cat.hom_by_pair.get((x, z))
        if target is None:
            raise InvalidCategoryError(f"Composite of {g} and {f} lands in the zero space from {x} to {z}")
        return Composite(c, target.name)

    @staticmethod
    def _factor(cat: SchurianCategory, left: Morphism, right: Morphism):
        """Scalar of left ∘ right where either side may be an identity; zero if a hom space is missing"""
        if isinstance(left, Identity) or isinstance(right, Identity):
            return cat.field.one
        return cat.constant(left, right)

    @staticmethod
    def _basis(cat: SchurianCategory, source: str, target: str) -> Optional[Morphism]:
        if source == target:
            return Identity(source)
        h = cat.hom_by_pair.get((source, target))
        return h.name if h else None

    @staticmethod
    def validate(cat: SchurianCategory) -> List[Violation]:
        """All violations of structure, pattern closure and associativity; empty means valid"""
        found = CategoryService._structural_violations(cat)
        if found:
            return found
        for (g, f), c in cat.constants.items():
            if c and CategoryService._basis(cat, cat.source(f), cat.target(g)) is None:
                found.append(Violation(
                    "pattern-closure",
                    f"c({g}, {f}) = {cat.field.to_string(c)} but there is no morphism from {cat.source(f)} to {cat.target(g)}",
                    (g, f),
                ))
        zero = cat.field.zero
        for g, f in cat.composable_pairs():
            for h in cat.homs_out[g.target]:
                hg = CategoryService._basis(cat, g.source, h.target)
                gf = CategoryService._basis(cat, f.source, g.target)
                left = cat.constant(h.name, g.name) * CategoryService._factor(cat, hg, f.name) if hg is not None else zero
                right = cat.constant(g.name, f.name) * CategoryService._factor(cat, h.name, gf) if gf is not None else zero
                if left != right:
                    found.append(Violation(
                        "associativity",
                        f"({h.name} {g.name}) {f.name} = {cat.field.to_string(left)} but "
                        f"{h.name} ({g.name} {f.name}) = {cat.field.to_string(right)}",
                        (h.name, g.name, f.name),
                    ))
        logger.debug(f"Validated category with {len(cat.objects)} objects: {len(found)} violations")
        return found

    @staticmethod
    def require_valid(cat: SchurianCategory) -> SchurianCategory:
        violations = CategoryService.validate(cat)
        if violations:
            raise InvalidCategoryError(f"Category has {len(violations)} violations", violations)
        return cat

    @staticmethod
    def graph(cat: SchurianCategory) -> nx.Graph:
        """Underlying undirected graph on objects"""
        g = nx.Graph()
        g.add_nodes_from(cat.objects)
        g.add_edges_from((h.source, h.target) for h in cat.homs)
        return g

    @staticmethod
    def is_connected(cat: SchurianCategory) -> bool:
        if not cat.objects:
            return False
        return nx.is_connected(CategoryService.graph(cat))

    @staticmethod
    def components(cat: SchurianCategory) -> List[List[str]]:
        """Connected components in object order"""
        index = cat.object_index
        comps = [sorted(c, key=index.__getitem__) for c in nx.connected_components(CategoryService.graph(cat))]
        return sorted(comps, key=lambda c: index[c[0]])

    @staticmethod
    def rescale_basis(cat: SchurianCategory, units: Mapping[Tuple[str, str], object]) -> SchurianCategory:
        """Replace each basis morphism from x to y by μ·e; c'(g, f) = c(g, f)·μ_g·μ_f / μ_gf.

        Args:
            cat: Category
            units: (source, target) -> nonzero scalar; unlisted pairs keep μ = 1
        """
        K = cat.field
        mu: Dict[str, object] = {}
        for (x, y), value in units.items():
            h = cat.hom_by_pair.get((x, y))
            if h is None:
                raise MalformedInputError(f"No morphism from {x} to {y} to rescale")
            scalar = K(value)
            if not scalar:
                raise MalformedInputError(f"Zero rescaling of the morphism from {x} to {y}")
            mu[h.name] = scalar

        def unit(m: Optional[Morphism]):
            return K.one if m is None or isinstance(m, Identity) else mu.get(m, K.one)

        constants = {}
        for (g, f), c in cat.constants.items():
            gf = CategoryService._basis(cat, cat.source(f), cat.target(g))
            constants[(g, f)] = c * unit(g) * unit(f) / unit(gf)
        return SchurianCategory(K, cat.objects, cat.homs, constants, dict(cat.metadata))

    @staticmethod
    def permute_objects(cat: SchurianCategory, order: Sequence[str]) -> SchurianCategory:
        """Same category with a different object order"""
        if sorted(order) != sorted(cat.objects) or len(set(order)) != len(order):
            raise MalformedInputError("Object order must be a permutation of the objects")
        return SchurianCategory(cat.field, tuple(order), cat.homs, dict(cat.constants), dict(cat.metadata))

    @staticmethod
    def disjoint_union(
        left: SchurianCategory, right: SchurianCategory, prefixes: Tuple[str, str] = ("L.", "R.")
    ) -> SchurianCategory:
        """Disjoint union with names prefixed to keep them apart"""
        if left.field != right.field:
            raise MalformedInputError("Disjoint union of categories over different fields")
        objects, homs, constants = [], [], {}
        for cat, prefix in zip((left, right), prefixes):
            objects.extend(prefix + x for x in cat.objects)
            homs.extend((prefix + h.name, prefix + h.source, prefix + h.target) for h in cat.homs)
            constants.update({(prefix + g, prefix + f): c for (g, f), c in cat.constants.items()})
        return CategoryService.build_category(left.field, objects, homs, constants)

    @staticmethod
    def build_complete_groupoid(n: int, field: Optional[Field] = None) -> SchurianCategory:
        """Complete Schurian groupoid on objects "1".."n", all constants 1.

        The morphism from x to y is named e_y_x.
        """
        if n < 1:
            raise MalformedInputError(f"Complete groupoid needs n >= 1, got {n}")
        field = field or Field()
        objects = [str(i) for i in range(1, n + 1)]
        homs = [(f"e_{y}_{x}", x, y) for x, y in product(objects, objects) if x != y]
        compositions = {}
        for (g, gs, gt), (f, fs, ft) in product(homs, homs):
            if gs == ft:
                compositions[(g, f)] = 1
        cat = CategoryService.build_category(
            field, objects, homs, compositions, {"builder": "groupoid", "n": n}
        )
        logger.info(f"Built complete groupoid on {n} objects ({len(homs)} morphisms)")
        return cat

    @staticmethod
    def build_broken_ladder(m: int, s: int, field: Optional[Field] = None) -> SchurianCategory:
        """Finite truncation of the broken ladder on a_0..a_m, b_0..b_m.

        Morphisms a_i -> a_j for i > j, b_i -> b_j for j > i and a_i -> b_j for all
        i, j. The cross morphism a_i -> b_j has crossing level min(i, j). A composite
        landing on a_i -> b_j is zero iff i > s, j > s and the level of its cross
        factor is at most s.
        """
        if m < 1 or not 0 <= s < m:
            raise MalformedInputError(f"Broken ladder needs m >= 1 and 0 <= s < m, got m={m}, s={s}")
        field = field or Field()
        a = [f"a{i}" for i in range(m + 1)]
        b = [f"b{i}" for i in range(m + 1)]
        homs, levels = [], {}
        for x, y in product(a + b, a + b):
            kx, i = x[0], int(x[1:])
            ky, j = y[0], int(y[1:])
            if kx == "a" and ky == "a" and i > j:
                homs.append((f"beta{i}" if i == j + 1 else f"a{i}_to_a{j}", x, y))
            elif kx == "b" and ky == "b" and j > i:
                homs.append((f"gamma{i}" if j == i + 1 else f"b{i}_to_b{j}", x, y))
            elif kx == "a" and ky == "b":
                name = f"alpha{i}" if i == j else f"a{i}_to_b{j}"
                homs.append((name, x, y))
                levels[name] = min(i, j)
        compositions = {}
        for (g, gs, gt), (f, fs, ft) in product(homs, homs):
            if gs != ft:
                continue
            cross = g if g in levels else f if f in levels else None
            scalar = 1
            if cross is not None:
                i, j = int(fs[1:]), int(gt[1:])
                if i > s and j > s and levels[cross] <= s:
                    scalar = 0
            compositions[(g, f)] = scalar
        cat = CategoryService.build_category(
            field, a + b, homs, compositions,
            {"builder": "ladder", "m": m, "s": s, "crossingLevels": levels},
        )
        logger.info(f"Built broken ladder m={m}, s={s} ({len(cat.homs)} morphisms)")
        return cat


# Global service instance
category_service = CategoryService()
