import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, NamedTuple, Tuple

import networkx as nx
from sympy.polys.matrices import DomainMatrix

from schurian.exceptions import DisconnectedError
from schurian.services.category_service import CategoryService, Hom, Identity, SchurianCategory, Walk
from schurian.services.exactalg import AbelianInvariants, ExactAlgebraService, Field

logger = logging.getLogger(__name__)

TRIANGLE = "triangle"
BIGON = "bigon"


class TwoCell(NamedTuple):
    """2-cell created by the nonzero composite of pair = (g, f)"""

    kind: str
    pair: Tuple[str, str]
    boundary: Walk

    def boundary_signs(self) -> Dict[str, int]:
        """Coefficient of each edge in the cellular boundary"""
        signs: Dict[str, int] = {}
        for name, sign in self.boundary.steps:
            signs[name] = signs.get(name, 0) + sign
        return signs


@dataclass(frozen=True)
class CwComplex:
    """2-complex attached to a Schurian category"""

    vertices: Tuple[str, ...]
    edges: Tuple[Hom, ...]
    two_cells: Tuple[TwoCell, ...]

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {e.name: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_by_name(self) -> Dict[str, Hom]:
        return {e.name: e for e in self.edges}

    def counts(self) -> Tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.two_cells)


class CwService:
    """Construction and cellular (co)homology of CW(C)"""

    @staticmethod
    def build_cw(cat: SchurianCategory) -> CwComplex:
        """One vertex per object, one edge per basis morphism, one 2-cell per nonzero off-diagonal composite.

        Args:
            cat: Valid Schurian category

        Returns:
            CwComplex with triangles (t(g) != s(f)) and bigons (t(g) = s(f))
        """
        CategoryService.require_valid(cat)
        cells: List[TwoCell] = []
        for g, f in cat.composable_pairs():
            composite = CategoryService.compose(cat, g.name, f.name)
            if composite.is_zero:
                continue
            steps = [(f.name, 1), (g.name, 1)]
            if isinstance(composite.result, Identity):
                cells.append(TwoCell(BIGON, (g.name, f.name), Walk(f.source, tuple(steps), f.source)))
            else:
                steps.append((composite.result, -1))
                cells.append(TwoCell(TRIANGLE, (g.name, f.name), Walk(f.source, tuple(steps), f.source)))
        cw = CwComplex(tuple(cat.objects), tuple(cat.homs), tuple(cells))
        logger.info(f"Built CW complex: {len(cw.vertices)} vertices, {len(cw.edges)} edges, {len(cw.two_cells)} two-cells")
        return cw

    @staticmethod
    def euler_characteristic(cw: CwComplex) -> int:
        v, e, f = cw.counts()
        return v - e + f

    @staticmethod
    def is_connected(cw: CwComplex) -> bool:
        graph = nx.Graph()
        graph.add_nodes_from(cw.vertices)
        graph.add_edges_from((e.source, e.target) for e in cw.edges)
        return bool(cw.vertices) and nx.is_connected(graph)

    @staticmethod
    def require_connected(cw: CwComplex) -> CwComplex:
        if not CwService.is_connected(cw):
            raise DisconnectedError("The complex is not connected")
        return cw

    @staticmethod
    def boundary_matrices(cw: CwComplex) -> Tuple[DomainMatrix, DomainMatrix]:
        """Integer boundary maps ∂1 (vertices x edges) and ∂2 (edges x 2-cells)"""
        v, e, f = cw.counts()
        d1: Dict[int, Dict[int, int]] = {}
        for j, edge in enumerate(cw.edges):
            d1.setdefault(cw.vertex_index[edge.target], {})[j] = 1
            d1.setdefault(cw.vertex_index[edge.source], {})[j] = -1
        d2: Dict[int, Dict[int, int]] = {}
        for j, cell in enumerate(cw.two_cells):
            for name, coefficient in cell.boundary_signs().items():
                if coefficient:
                    d2.setdefault(cw.edge_index[name], {})[j] = coefficient
        return (
            ExactAlgebraService.sparse_integer_matrix(d1, (v, e)),
            ExactAlgebraService.sparse_integer_matrix(d2, (e, f)),
        )

    @staticmethod
    def cellular_homology_h1(cw: CwComplex) -> AbelianInvariants:
        """H1 = ker ∂1 / im ∂2 via Smith normal forms"""
        CwService.require_connected(cw)
        d1, d2 = CwService.boundary_matrices(cw)
        rank_d1 = sum(1 for d in ExactAlgebraService.smith_normal_form(d1).diagonal if d)
        image = [d for d in ExactAlgebraService.smith_normal_form(d2).diagonal if d]
        result = AbelianInvariants(len(cw.edges) - rank_d1 - len(image), tuple(d for d in image if d > 1))
        logger.debug(f"Cellular H1: rank {result.free_rank}, torsion {list(result.torsion)}")
        return result

    @staticmethod
    def cohomology_dim_h1(cw: CwComplex, field: Field) -> int:
        """dim_k ker δ2 / im δ1 = #edges − rank ∂2 − rank ∂1 over k"""
        CwService.require_connected(cw)
        d1, d2 = CwService.boundary_matrices(cw)
        rank_d1 = ExactAlgebraService.rank(ExactAlgebraService.reduce_mod(d1, field))
        rank_d2 = ExactAlgebraService.rank(ExactAlgebraService.reduce_mod(d2, field))
        return len(cw.edges) - rank_d2 - rank_d1

    @staticmethod
    def emit_dot(cw: CwComplex, name: str = "CW") -> str:
        """DOT text of the 1-skeleton; 2-cells appear as comments"""
        lines = [f"digraph {name} {{"]
        lines.extend(f'  "{v}";' for v in cw.vertices)
        lines.extend(f'  "{e.source}" -> "{e.target}" [label="{e.name}"];' for e in cw.edges)
        for cell in cw.two_cells:
            walk = " ".join(f"{n}{'' if s == 1 else '^-1'}" for n, s in cell.boundary.steps)
            lines.append(f"  // {cell.kind} {cell.pair[0]}*{cell.pair[1]}: {walk}")
        lines.append("}")
        return "\n".join(lines) + "\n"


# Global service instance
cw_service = CwService()
