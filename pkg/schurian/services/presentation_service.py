import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from schurian.exceptions import MalformedInputError, UnknownObjectError, VerificationError
from schurian.services.category_service import Walk
from schurian.services.cw_service import CwComplex, CwService
from schurian.services.exactalg import AbelianInvariants, ExactAlgebraService, Field

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
# Words are read like compositions: the rightmost letter acts first.
Word = Tuple[Letter, ...]


def free_reduce(word: Sequence[Letter]) -> Word:
    """Cancel adjacent x x^-1 pairs"""
    stack: List[Letter] = []
    for letter in word:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def inverse_word(word: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def cyclically_reduce(word: Sequence[Letter]) -> Word:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def word_to_strings(word: Sequence[Letter]) -> List[str]:
    return [g if e == 1 else f"{g}^-1" for g, e in word]


def word_from_strings(items: Sequence[str]) -> Word:
    letters = []
    for item in items:
        if item.endswith("^-1"):
            letters.append((item[:-3], -1))
        else:
            letters.append((item, 1))
    return tuple(letters)


@dataclass(frozen=True)
class SpanningTree:
    """Breadth-first spanning tree with the tree walk from the basepoint to every vertex"""

    basepoint: str
    edges: Tuple[str, ...]
    paths: Mapping[str, Walk]

    def contains(self, edge: str) -> bool:
        return edge in self.edges


@dataclass(frozen=True)
class GroupPresentation:
    """Finite presentation <generators | relators>"""

    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    basepoint: Optional[str] = None
    tree: Optional[SpanningTree] = None

    def relator_matrix(self) -> List[List[int]]:
        """Exponent sums, one row per relator"""
        index = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[index[g]] += e
            rows.append(row)
        return rows


@dataclass(frozen=True)
class Character:
    """Additive character: a value in k for each generator"""

    field: Field
    generators: Tuple[str, ...]
    values: Tuple

    def value(self, generator: str):
        return self.values[self.generators.index(generator)]

    def evaluate(self, word: Sequence[Letter]):
        lookup = dict(zip(self.generators, self.values))
        total = self.field.zero
        for g, e in word:
            total += lookup[g] if e == 1 else -lookup[g]
        return total


class PresentationService:
    """Spanning trees, π1 presentations and their abelian invariants"""

    @staticmethod
    def spanning_tree(cw: CwComplex, basepoint: str) -> SpanningTree:
        """Deterministic BFS tree; edges at each vertex are explored in (source, target) object order.

        Args:
            cw: Connected complex
            basepoint: Root vertex

        Returns:
            SpanningTree with tree edges in discovery order
        """
        if basepoint not in cw.vertex_index:
            raise UnknownObjectError(f"Unknown base object: {basepoint}")
        CwService.require_connected(cw)
        index = cw.vertex_index
        incident: Dict[str, List] = {v: [] for v in cw.vertices}
        for e in cw.edges:
            incident[e.source].append(e)
            if e.target != e.source:
                incident[e.target].append(e)
        for v in incident:
            incident[v].sort(key=lambda e: (index[e.source], index[e.target]))

        paths = {basepoint: Walk.empty(basepoint)}
        tree_edges: List[str] = []
        queue = deque([basepoint])
        while queue:
            v = queue.popleft()
            for e in incident[v]:
                other, sign = (e.target, 1) if e.source == v else (e.source, -1)
                if other in paths:
                    continue
                paths[other] = paths[v].then(Walk(v, ((e.name, sign),), other))
                tree_edges.append(e.name)
                queue.append(other)
        logger.debug(f"Spanning tree at {basepoint}: {tree_edges}")
        return SpanningTree(basepoint, tuple(tree_edges), paths)

    @staticmethod
    def edge_loop(cw: CwComplex, tree: SpanningTree, edge: str) -> Walk:
        """tree(t(e))^-1 · e · tree(s(e)), a closed walk at the basepoint"""
        e = cw.edge_by_name[edge]
        step = Walk(e.source, ((edge, 1),), e.target)
        return tree.paths[e.source].then(step).then(tree.paths[e.target].inverse())

    @staticmethod
    def pi1_presentation(cw: CwComplex, basepoint: str) -> GroupPresentation:
        """Generators are the non-tree edges; each 2-cell boundary gives one relator"""
        tree = PresentationService.spanning_tree(cw, basepoint)
        generators = tuple(e.name for e in cw.edges if not tree.contains(e.name))
        relators = tuple(
            tuple((name, sign) for name, sign in reversed(cell.boundary.steps) if not tree.contains(name))
            for cell in cw.two_cells
        )
        logger.info(f"Presentation of pi1 at {basepoint}: {len(generators)} generators, {len(relators)} relators")
        return GroupPresentation(generators, relators, basepoint, tree)

    @staticmethod
    def word_of_walk(walk: Walk, tree: SpanningTree) -> Word:
        """Word of a closed walk at the basepoint; tree edges contribute nothing"""
        if walk.start != tree.basepoint or walk.end != tree.basepoint:
            raise MalformedInputError(
                f"Walk from {walk.start} to {walk.end} is not closed at {tree.basepoint}"
            )
        return free_reduce([(name, sign) for name, sign in reversed(walk.steps) if not tree.contains(name)])

    @staticmethod
    def abelianization(pres: GroupPresentation) -> AbelianInvariants:
        matrix = pres.relator_matrix()
        return ExactAlgebraService.abelian_invariants(matrix, len(pres.generators))

    @staticmethod
    def character_space(pres: GroupPresentation, field: Field) -> List[Character]:
        """Basis of Hom(group, k+): the nullspace of the relator matrix over k"""
        m = ExactAlgebraService.field_matrix(pres.relator_matrix(), field, cols=len(pres.generators))
        basis = ExactAlgebraService.nullspace_basis(m)
        return [Character(field, pres.generators, tuple(v)) for v in basis]

    @staticmethod
    def simplify_presentation(pres: GroupPresentation) -> GroupPresentation:
        """Tietze moves: drop empty relators, eliminate a generator occurring once in a relator"""
        generators = list(pres.generators)
        relators = [cyclically_reduce(r) for r in pres.relators]
        while True:
            relators = [r for r in relators if r]
            move = PresentationService._elimination(relators)
            if move is None:
                break
            position, k = move
            relator = relators.pop(position)
            gen, exp = relator[k]
            before, after = relator[:k], relator[k + 1:]
            # before · gen^exp · after = 1
            image = inverse_word(after + before) if exp == 1 else after + before
            image = free_reduce(image)
            generators.remove(gen)
            relators = [cyclically_reduce(PresentationService._substitute(r, gen, image)) for r in relators]
        result = GroupPresentation(tuple(generators), tuple(relators), pres.basepoint, pres.tree)
        if PresentationService.abelianization(result) != PresentationService.abelianization(pres):
            raise VerificationError("Tietze simplification changed the abelianization")
        if relators:
            logger.warning(f"Simplified presentation still has {len(relators)} relators")
        return result

    @staticmethod
    def _elimination(relators: List[Word]) -> Optional[Tuple[int, int]]:
        for position, r in enumerate(relators):
            counts: Dict[str, int] = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for k, (g, _) in enumerate(r):
                if counts[g] == 1:
                    return position, k
        return None

    @staticmethod
    def _substitute(word: Word, gen: str, image: Word) -> Word:
        out: List[Letter] = []
        for g, e in word:
            if g != gen:
                out.append((g, e))
            else:
                out.extend(image if e == 1 else inverse_word(image))
        return free_reduce(out)


# Global service instance
presentation_service = PresentationService()
