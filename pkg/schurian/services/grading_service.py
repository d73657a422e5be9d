import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from schurian.config import settings
from schurian.exceptions import (
    DisconnectedError,
    MalformedInputError,
    NoConnectorSetError,
    UndecidableTargetError,
    UnsupportedGroupError,
    VerificationError,
)
from schurian.services.category_service import CategoryService, Identity, SchurianCategory, Violation, Walk
from schurian.services.cw_service import CwComplex, CwService
from schurian.services.exactalg import ExactAlgebraService
from schurian.services.presentation_service import (
    GroupPresentation,
    PresentationService,
    SpanningTree,
    Word,
    cyclically_reduce,
    free_reduce,
    inverse_word,
    word_from_strings,
    word_to_strings,
)

logger = logging.getLogger(__name__)

Element = Hashable


class GradingGroup(ABC):
    """Target group of a grading"""

    kind: str = ""

    @property
    @abstractmethod
    def identity(self) -> Element:
        pass

    @abstractmethod
    def multiply(self, a: Element, b: Element) -> Element:
        pass

    @abstractmethod
    def inverse(self, a: Element) -> Element:
        pass

    @abstractmethod
    def equal(self, a: Element, b: Element) -> bool:
        pass

    @abstractmethod
    def parse_element(self, raw) -> Element:
        """Element from its JSON form"""

    @abstractmethod
    def element_to_json(self, a: Element):
        pass

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> List[Element]:
        raise UnsupportedGroupError(f"Cannot enumerate the elements of a {self.kind} group")

    def label(self, a: Element) -> str:
        return str(a)

    def generates(self, generators: Sequence[Element]) -> bool:
        """Whether the elements generate the whole group"""
        raise UnsupportedGroupError(f"Subgroup membership is not decidable for a {self.kind} group")

    def product_of(self, factors: Iterable[Element]) -> Element:
        result = self.identity
        for a in factors:
            result = self.multiply(result, a)
        return result


class FiniteGroup(GradingGroup):
    """Finite group given by its multiplication table (table[a][b] = a·b)"""

    kind = "finite"

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[str]]):
        self._elements = tuple(str(e) for e in elements)
        n = len(self._elements)
        if n == 0:
            raise MalformedInputError("A finite group needs at least one element")
        if n > settings.max_group_order:
            raise UnsupportedGroupError(f"Group order {n} exceeds the limit {settings.max_group_order}")
        if len(set(self._elements)) != n:
            raise MalformedInputError("Group element names are not unique")
        self._index = {e: i for i, e in enumerate(self._elements)}
        if len(table) != n or any(len(row) != n for row in table):
            raise MalformedInputError(f"Multiplication table must be {n}x{n}")
        try:
            self._table = [[self._index[str(c)] for c in row] for row in table]
        except KeyError as e:
            raise MalformedInputError(f"Multiplication table is not closed: {e.args[0]} is not an element")
        self._identity = self._find_identity()
        self._check_associative()
        self._inverses = self._find_inverses()

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(["1"], [["1"]])

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        """Z/n with elements "0".."n-1" under addition"""
        names = [str(i) for i in range(n)]
        return cls(names, [[names[(i + j) % n] for j in range(n)] for i in range(n)])

    def _find_identity(self) -> int:
        n = len(self._elements)
        for e in range(n):
            if all(self._table[e][a] == a and self._table[a][e] == a for a in range(n)):
                return e
        raise MalformedInputError("Multiplication table has no identity element")

    def _check_associative(self) -> None:
        t = self._table
        n = len(t)
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise MalformedInputError(
                    f"Multiplication table is not associative at "
                    f"({self._elements[a]}, {self._elements[b]}, {self._elements[c]})"
                )

    def _find_inverses(self) -> List[int]:
        inverses = []
        for a in range(len(self._elements)):
            for b in range(len(self._elements)):
                if self._table[a][b] == self._identity and self._table[b][a] == self._identity:
                    inverses.append(b)
                    break
            else:
                raise MalformedInputError(f"Element {self._elements[a]} has no inverse")
        return inverses

    @property
    def identity(self) -> str:
        return self._elements[self._identity]

    @property
    def table(self) -> List[List[str]]:
        return [[self._elements[c] for c in row] for row in self._table]

    def multiply(self, a: str, b: str) -> str:
        return self._elements[self._table[self._index[a]][self._index[b]]]

    def inverse(self, a: str) -> str:
        return self._elements[self._inverses[self._index[a]]]

    def equal(self, a: str, b: str) -> bool:
        return a == b

    def parse_element(self, raw) -> str:
        name = str(raw)
        if name not in self._index:
            raise MalformedInputError(f"{raw!r} is not an element of the group")
        return name

    def element_to_json(self, a: str):
        return a

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> List[str]:
        return list(self._elements)

    def generates(self, generators: Sequence[str]) -> bool:
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            a = queue.popleft()
            for g in generators:
                b = self.multiply(a, g)
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return len(seen) == len(self._elements)


class FgAbelianGroup(GradingGroup):
    """Z^rank ⊕ Z/t_1 ⊕ ... written additively; elements are integer tuples"""

    kind = "abelian"

    def __init__(self, rank: int, torsion: Sequence[int] = ()):
        if rank < 0 or any(t < 2 for t in torsion):
            raise MalformedInputError("Abelian group needs rank >= 0 and torsion moduli >= 2")
        self.rank = rank
        self.torsion = tuple(torsion)

    @property
    def dimension(self) -> int:
        return self.rank + len(self.torsion)

    def normalize(self, v: Sequence[int]) -> Tuple[int, ...]:
        head = tuple(v[: self.rank])
        tail = tuple(x % t for x, t in zip(v[self.rank:], self.torsion))
        return head + tail

    @property
    def identity(self) -> Tuple[int, ...]:
        return (0,) * self.dimension

    def multiply(self, a, b):
        return self.normalize([x + y for x, y in zip(a, b)])

    def inverse(self, a):
        return self.normalize([-x for x in a])

    def equal(self, a, b) -> bool:
        return self.normalize(a) == self.normalize(b)

    def parse_element(self, raw) -> Tuple[int, ...]:
        values = [raw] if isinstance(raw, int) and not isinstance(raw, bool) else raw
        if not isinstance(values, (list, tuple)) or len(values) != self.dimension or \
                not all(isinstance(x, int) and not isinstance(x, bool) for x in values):
            raise MalformedInputError(f"{raw!r} is not an element of an abelian group of dimension {self.dimension}")
        return self.normalize(values)

    def element_to_json(self, a):
        return list(a)

    def label(self, a) -> str:
        return "(" + ",".join(str(x) for x in a) + ")"

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def elements(self) -> List[Tuple[int, ...]]:
        if not self.is_finite:
            return super().elements()
        order = 1
        for t in self.torsion:
            order *= t
        if order > settings.max_group_order:
            raise UnsupportedGroupError(f"Group order {order} exceeds the limit {settings.max_group_order}")
        return [tuple(v) for v in product(*(range(t) for t in self.torsion))]

    def relation_vectors(self) -> List[List[int]]:
        """t_i e_i for every torsion component"""
        vectors = []
        for i, t in enumerate(self.torsion):
            v = [0] * self.dimension
            v[self.rank + i] = t
            vectors.append(v)
        return vectors

    def generates(self, generators: Sequence[Tuple[int, ...]]) -> bool:
        vectors = [list(g) for g in generators] + self.relation_vectors()
        return ExactAlgebraService.lattice_is_full(vectors, self.dimension)


class PresentedGroup(GradingGroup):
    """Group given by a presentation; elements are words.

    Equality is decided only when the quotient freely reduces to the empty word
    or is a cyclic conjugate of a relator or its inverse.
    """

    kind = "presented"

    def __init__(self, presentation: GroupPresentation):
        self.presentation = presentation
        self._relators = set()
        for r in presentation.relators:
            for w in (cyclically_reduce(r), cyclically_reduce(inverse_word(r))):
                self._relators.add(w)

    @property
    def identity(self) -> Word:
        return ()

    def multiply(self, a, b):
        return free_reduce(tuple(a) + tuple(b))

    def inverse(self, a):
        return inverse_word(a)

    def equal(self, a, b) -> bool:
        quotient = cyclically_reduce(tuple(a) + inverse_word(b))
        if not quotient:
            return True
        for r in self._relators:
            if _is_rotation(quotient, r):
                return True
        raise UndecidableTargetError(
            f"Cannot decide whether {word_to_strings(a)} equals {word_to_strings(b)} in a presented group"
        )

    def parse_element(self, raw) -> Word:
        if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
            raise MalformedInputError(f"{raw!r} is not a word")
        word = word_from_strings(raw)
        unknown = {g for g, _ in word} - set(self.presentation.generators)
        if unknown:
            raise MalformedInputError(f"Unknown generators: {sorted(unknown)}")
        return free_reduce(word)

    def element_to_json(self, a):
        return word_to_strings(a)

    def label(self, a) -> str:
        return " ".join(word_to_strings(a)) or "1"


def _is_rotation(word: Word, relator: Word) -> bool:
    if len(word) != len(relator):
        return False
    doubled = relator + relator
    return any(doubled[i:i + len(word)] == word for i in range(len(relator)))


@dataclass(frozen=True)
class ConnectorSet:
    """Walk from the basepoint to every object; the basepoint's walk is empty"""

    basepoint: str
    walks: Mapping[str, Walk]


@dataclass(frozen=True)
class Grading:
    """Degree of every basis morphism; identities have degree 1"""

    group: GradingGroup
    degrees: Mapping[str, Element]
    basepoint: Optional[str] = None
    connectors: Optional[ConnectorSet] = None
    metadata: Mapping = field(default_factory=dict, compare=False)

    def degree(self, hom: str) -> Element:
        try:
            return self.degrees[hom]
        except KeyError:
            raise MalformedInputError(f"Grading assigns no degree to {hom}")


@dataclass(frozen=True)
class QuotientMorphism:
    """φ on the generators of π1 plus the checks that make it a quotient map"""

    images: Mapping[str, Element]
    relators_trivial: bool
    surjective: bool
    edgewise: bool
    literal: Optional[bool]
    presentation: GroupPresentation

    @property
    def ok(self) -> bool:
        return self.relators_trivial and self.surjective and self.edgewise and self.literal is not False


@dataclass(frozen=True)
class Conjugator:
    """a_x = [u_x^-1 v_x] and whether conjugating Z_u by a gives Z_v literally"""

    values: Mapping[str, Word]
    verified: bool


@dataclass(frozen=True)
class SmashProduct:
    """C#X with its projection functor"""

    category: SchurianCategory
    object_of: Mapping[Tuple[str, Element], str]
    object_projection: Mapping[str, str]
    hom_projection: Mapping[str, str]


@dataclass(frozen=True)
class SmashIsoWitness:
    """H: C#(aX) -> C#X, (x, s) -> (x, s·a_x^-1), and its checks"""

    object_map: Mapping[str, str]
    hom_map: Mapping[str, str]
    bijective: bool
    preserves_homs: bool
    preserves_constants: bool
    commutes_with_projections: bool

    @property
    def verified(self) -> bool:
        return self.bijective and self.preserves_homs and self.preserves_constants and self.commutes_with_projections


class GradingService:
    """Gradings, connectors, the universal grading and smash-product coverings"""

    @staticmethod
    def trivial_grading(cat: SchurianCategory) -> Grading:
        group = FiniteGroup.trivial()
        return Grading(group, {h.name: group.identity for h in cat.homs})

    @staticmethod
    def check_grading(cat: SchurianCategory, grading: Grading) -> List[Violation]:
        """Violations of deg(g)·deg(f) = deg(gf) over nonzero composites.

        Raises:
            UndecidableTargetError: a presented-group equality cannot be decided
        """
        group = grading.group
        found = []
        for h in cat.homs:
            if h.name not in grading.degrees:
                found.append(Violation("missing-degree", f"No degree for {h.name}", (h.name,)))
        for name in grading.degrees:
            if name not in cat.hom_by_name:
                found.append(Violation("unknown-hom", f"Degree given for undeclared morphism {name}", (name,)))
        if found:
            return found
        for g, f in cat.composable_pairs():
            composite = CategoryService.compose(cat, g.name, f.name)
            if composite.is_zero:
                continue
            lhs = group.multiply(grading.degrees[g.name], grading.degrees[f.name])
            if isinstance(composite.result, Identity):
                rhs = group.identity
            else:
                rhs = grading.degrees[composite.result]
            if not group.equal(lhs, rhs):
                found.append(Violation(
                    "grading-law",
                    f"deg({g.name})·deg({f.name}) = {group.label(lhs)} but the composite has degree {group.label(rhs)}",
                    (g.name, f.name),
                ))
        return found

    @staticmethod
    def require_grading(cat: SchurianCategory, grading: Grading) -> Grading:
        violations = GradingService.check_grading(cat, grading)
        if violations:
            raise MalformedInputError(f"Grading violates the grading law: {violations[0].message}")
        return grading

    @staticmethod
    def walk_degree(grading: Grading, walk: Walk) -> Element:
        """Ordered product of step degrees, first traversed step rightmost"""
        group = grading.group
        degree = group.identity
        for name, sign in walk.steps:
            d = grading.degree(name)
            degree = group.multiply(d if sign == 1 else group.inverse(d), degree)
        return degree

    @staticmethod
    def _tree(cat: SchurianCategory, basepoint: str) -> Tuple[CwComplex, SpanningTree]:
        cat.require_object(basepoint)
        if not CategoryService.is_connected(cat):
            raise DisconnectedError("The category is not connected")
        cw = CwService.build_cw(cat)
        return cw, PresentationService.spanning_tree(cw, basepoint)

    @staticmethod
    def loop_degrees(cat: SchurianCategory, grading: Grading, basepoint: str) -> Dict[str, Element]:
        """Degree of the tree loop through each edge"""
        cw, tree = GradingService._tree(cat, basepoint)
        return {
            e.name: GradingService.walk_degree(grading, PresentationService.edge_loop(cw, tree, e.name))
            for e in cw.edges
        }

    @staticmethod
    def _require_decidable(grading: Grading) -> None:
        if isinstance(grading.group, PresentedGroup):
            raise UnsupportedGroupError("This operation needs a finite or finitely generated abelian group")

    @staticmethod
    def is_connected_grading(cat: SchurianCategory, grading: Grading, basepoint: str) -> bool:
        """True iff the degrees of closed walks at the basepoint generate the group"""
        GradingService._require_decidable(grading)
        loops = GradingService.loop_degrees(cat, grading, basepoint)
        return grading.group.generates(list(loops.values()))

    @staticmethod
    def connector_walks(cat: SchurianCategory, grading: Grading, basepoint: str) -> ConnectorSet:
        """Degree-1 walk from the basepoint to every object.

        Finite groups: breadth-first search on objects x group elements.
        Abelian groups: correct a tree walk by an integer combination of edge loops.
        """
        GradingService._require_decidable(grading)
        cw, tree = GradingService._tree(cat, basepoint)
        if isinstance(grading.group, FiniteGroup):
            walks = GradingService._product_search(cat, cw, grading, basepoint)
        else:
            walks = GradingService._abelian_connectors(cw, tree, grading, basepoint)
        for x, w in walks.items():
            if not grading.group.equal(GradingService.walk_degree(grading, w), grading.group.identity):
                raise VerificationError(f"Connector to {x} does not have degree 1")
        return ConnectorSet(basepoint, walks)

    @staticmethod
    def _product_search(cat: SchurianCategory, cw: CwComplex, grading: Grading, basepoint: str) -> Dict[str, Walk]:
        group = grading.group
        if len(cat.objects) * len(group.elements()) > settings.max_group_order:
            raise UnsupportedGroupError("Product graph of objects and group elements is too large")
        index = cw.vertex_index
        incident = {v: [] for v in cw.vertices}
        for e in cw.edges:
            incident[e.source].append(e)
            incident[e.target].append(e)
        for v in incident:
            incident[v].sort(key=lambda e: (index[e.source], index[e.target]))

        start = (basepoint, group.identity)
        walks = {start: Walk.empty(basepoint)}
        queue = deque([start])
        while queue:
            x, d = queue.popleft()
            for e in incident[x]:
                if e.source == x:
                    nxt, sign, step = e.target, 1, grading.degree(e.name)
                else:
                    nxt, sign, step = e.source, -1, group.inverse(grading.degree(e.name))
                state = (nxt, group.multiply(step, d))
                if state in walks:
                    continue
                walks[state] = walks[(x, d)].then(Walk(x, ((e.name, sign),), nxt))
                queue.append(state)
        result = {}
        for x in cat.objects:
            walk = walks.get((x, group.identity))
            if walk is None:
                raise NoConnectorSetError(f"No walk of degree 1 from {basepoint} to {x}")
            result[x] = walk
        return result

    @staticmethod
    def _abelian_connectors(cw: CwComplex, tree: SpanningTree, grading: Grading, basepoint: str) -> Dict[str, Walk]:
        group: FgAbelianGroup = grading.group
        loops = {e.name: PresentationService.edge_loop(cw, tree, e.name) for e in cw.edges}
        loop_degree = {name: GradingService.walk_degree(grading, w) for name, w in loops.items()}
        names = list(loops)
        columns = [list(loop_degree[n]) for n in names] + group.relation_vectors()
        matrix = [[c[i] for c in columns] for i in range(group.dimension)]
        result = {}
        for x in cw.vertices:
            walk = tree.paths[x]
            d = GradingService.walk_degree(grading, walk)
            if group.equal(d, group.identity):
                result[x] = walk
                continue
            solution = ExactAlgebraService.integer_solve(matrix, [-v for v in d]) if group.dimension else None
            if solution is None:
                raise NoConnectorSetError(f"No walk of degree 0 from {basepoint} to {x}")
            correction = Walk.empty(basepoint)
            for name, n in zip(names, solution):
                loop = loops[name] if n > 0 else loops[name].inverse()
                for _ in range(abs(n)):
                    correction = correction.then(loop)
            result[x] = correction.then(walk)
        return result

    @staticmethod
    def universal_grading(cw: CwComplex, basepoint: str) -> Grading:
        """Z_u with tree connectors: non-tree edges get their generator, tree edges the empty word"""
        pres = PresentationService.pi1_presentation(cw, basepoint)
        connectors = ConnectorSet(basepoint, dict(pres.tree.paths))
        return GradingService.z_grading(cw, basepoint, connectors, pres)

    @staticmethod
    def z_grading(
        cw: CwComplex,
        basepoint: str,
        connectors: ConnectorSet,
        presentation: Optional[GroupPresentation] = None,
    ) -> Grading:
        """Z_{X,u}: deg(e) = [u_t(e)^-1 · e · u_s(e)] in π1(CW, basepoint)"""
        pres = presentation or PresentationService.pi1_presentation(cw, basepoint)
        if connectors.basepoint != basepoint:
            raise MalformedInputError(f"Connectors start at {connectors.basepoint}, expected {basepoint}")
        degrees = {}
        for e in cw.edges:
            step = Walk(e.source, ((e.name, 1),), e.target)
            loop = connectors.walks[e.source].then(step).then(connectors.walks[e.target].inverse())
            degrees[e.name] = PresentationService.word_of_walk(loop, pres.tree)
        tree_connectors = all(connectors.walks[x] == pres.tree.paths[x] for x in cw.vertices)
        return Grading(
            PresentedGroup(pres),
            degrees,
            basepoint,
            connectors,
            {"connectors": "spanning-tree" if tree_connectors else "grading"},
        )

    @staticmethod
    def connector_conjugator(cw: CwComplex, u: ConnectorSet, v: ConnectorSet) -> Conjugator:
        """a_x = [u_x^-1 v_x]; verifies that conjugating Z_u by a is literally Z_v"""
        pres = PresentationService.pi1_presentation(cw, u.basepoint)
        values = {
            x: PresentationService.word_of_walk(v.walks[x].then(u.walks[x].inverse()), pres.tree)
            for x in cw.vertices
        }
        z_u = GradingService.z_grading(cw, u.basepoint, u, pres)
        z_v = GradingService.z_grading(cw, v.basepoint, v, pres)
        verified = True
        for e in cw.edges:
            conjugated = free_reduce(inverse_word(values[e.target]) + z_u.degrees[e.name] + values[e.source])
            if conjugated != z_v.degrees[e.name]:
                verified = False
                logger.warning(f"Conjugated degree of {e.name} differs from Z_v")
        return Conjugator(values, verified)

    @staticmethod
    def quotient_morphism(cat: SchurianCategory, grading: Grading, basepoint: str) -> QuotientMorphism:
        """φ(gen_e) = deg_X(loop_e) and the checks that X is a quotient of Z_u through φ"""
        GradingService._require_decidable(grading)
        group = grading.group
        cw, tree = GradingService._tree(cat, basepoint)
        pres = PresentationService.pi1_presentation(cw, basepoint)
        loops = {e.name: PresentationService.edge_loop(cw, tree, e.name) for e in cw.edges}
        images = {g: GradingService.walk_degree(grading, loops[g]) for g in pres.generators}

        def phi(word: Word):
            return group.product_of(images[g] if e == 1 else group.inverse(images[g]) for g, e in word)

        relators_trivial = all(group.equal(phi(r), group.identity) for r in pres.relators)
        surjective = group.generates(list(images.values()))
        universal = GradingService.universal_grading(cw, basepoint)
        edgewise = all(
            group.equal(phi(universal.degrees[e.name]), GradingService.walk_degree(grading, loops[e.name]))
            for e in cw.edges
        )
        literal = None
        try:
            connectors = GradingService.connector_walks(cat, grading, basepoint)
        except NoConnectorSetError:
            logger.info("Grading has no connector set; skipping the literal quotient check")
        else:
            z_xu = GradingService.z_grading(cw, basepoint, connectors, pres)
            literal = all(group.equal(phi(z_xu.degrees[e.name]), grading.degree(e.name)) for e in cw.edges)
        result = QuotientMorphism(images, relators_trivial, surjective, edgewise, literal, pres)
        logger.info(
            f"Quotient morphism: relators trivial={relators_trivial}, surjective={surjective}, "
            f"edgewise={edgewise}, literal={literal}"
        )
        return result

    @staticmethod
    def conjugate_grading(cat: SchurianCategory, grading: Grading, a: Mapping[str, Element]) -> Grading:
        """deg'(f) = a_t(f)^-1 · deg(f) · a_s(f)"""
        missing = [x for x in cat.objects if x not in a]
        if missing:
            raise MalformedInputError(f"Conjugator has no value at {missing}")
        group = grading.group
        degrees = {
            h.name: group.multiply(group.multiply(group.inverse(a[h.target]), grading.degree(h.name)), a[h.source])
            for h in cat.homs
        }
        return Grading(group, degrees, grading.basepoint, None, dict(grading.metadata))

    @staticmethod
    def smash_product(cat: SchurianCategory, grading: Grading) -> SmashProduct:
        """Objects (x, s); the lift of e: x -> y at (x, s) ends at (y, s·deg(e)^-1)"""
        group = grading.group
        if not group.is_finite:
            raise UnsupportedGroupError("Smash products need a finite grading group")
        GradingService.require_grading(cat, grading)
        elements = group.elements()
        if len(cat.objects) * len(elements) > settings.max_smash_objects:
            raise UnsupportedGroupError(
                f"Smash product would have {len(cat.objects) * len(elements)} objects "
                f"(limit {settings.max_smash_objects})"
            )
        object_of = {(x, s): f"{x}@{group.label(s)}" for x in cat.objects for s in elements}
        lift: Dict[Tuple[str, Element], str] = {}
        homs, hom_projection = [], {}
        for h in cat.homs:
            inverse_degree = group.inverse(grading.degree(h.name))
            for s in elements:
                name = f"{h.name}@{group.label(s)}"
                homs.append((name, object_of[(h.source, s)], object_of[(h.target, group.multiply(s, inverse_degree))]))
                lift[(h.name, s)] = name
                hom_projection[name] = h.name
        constants = {}
        for (g, f), c in cat.constants.items():
            inverse_degree = group.inverse(grading.degree(f))
            for s in elements:
                constants[(lift[(g, group.multiply(s, inverse_degree))], lift[(f, s)])] = c
        objects = [object_of[(x, s)] for x in cat.objects for s in elements]
        smash = CategoryService.build_category(
            cat.field, objects, homs, constants, {"smash": True, "group": group.kind}
        )
        logger.info(f"Built smash product: {len(objects)} objects, {len(homs)} morphisms")
        return SmashProduct(smash, object_of, {v: k[0] for k, v in object_of.items()}, hom_projection)

    @staticmethod
    def smash_iso_witness(cat: SchurianCategory, grading: Grading, a: Mapping[str, Element]) -> SmashIsoWitness:
        """Check that (x, s) -> (x, s·a_x^-1) is an isomorphism C#(aX) -> C#X over C"""
        group = grading.group
        twisted = GradingService.smash_product(cat, GradingService.conjugate_grading(cat, grading, a))
        plain = GradingService.smash_product(cat, grading)
        object_map = {
            name: plain.object_of[(x, group.multiply(s, group.inverse(a[x])))]
            for (x, s), name in twisted.object_of.items()
        }
        bijective = len(set(object_map.values())) == len(plain.category.objects) == len(object_map)

        hom_map, preserves_homs = {}, True
        for h in twisted.category.homs:
            image = plain.category.hom_by_pair.get((object_map[h.source], object_map[h.target]))
            if image is None or plain.hom_projection[image.name] != twisted.hom_projection[h.name]:
                preserves_homs = False
                continue
            hom_map[h.name] = image.name
        preserves_homs = preserves_homs and len(set(hom_map.values())) == len(plain.category.homs)

        preserves_constants = preserves_homs and all(
            plain.category.constant(hom_map[g], hom_map[f]) == c
            for (g, f), c in twisted.category.constants.items()
        ) and len(twisted.category.constants) == len(plain.category.constants)
        commutes = all(
            plain.object_projection[object_map[o]] == twisted.object_projection[o] for o in object_map
        ) and all(plain.hom_projection[hom_map[h]] == twisted.hom_projection[h] for h in hom_map)
        witness = SmashIsoWitness(object_map, hom_map, bijective, preserves_homs, preserves_constants, commutes)
        if not witness.verified:
            logger.error("Smash product isomorphism witness failed to verify")
        return witness


# Global service instance
grading_service = GradingService()
