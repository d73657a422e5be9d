import pytest

from schurian.services.category_service import CategoryService
from schurian.services.cw_service import CwService
from schurian.services.exactalg import AbelianInvariants, ExactAlgebraService, Field
from schurian.services.grading_service import GradingService
from schurian.services.hochschild_service import ISOMORPHISM, HochschildService
from schurian.services.presentation_service import PresentationService
from schurian.tests.conftest import integer_grading, reduce_grading, suite

pytestmark = pytest.mark.slow

FIELDS = [Field(0), Field(5), Field(7)]
SUITE = suite()


def _invariants(cat, field):
    base = cat.objects[0]
    cw = CwService.build_cw(cat)
    pres = PresentationService.pi1_presentation(cw, base)
    result = HochschildService.verify_hurewicz_iso(cat, base, field)
    return {
        "counts": cw.counts(),
        "abelianization": PresentationService.abelianization(pres),
        "hh1": result.dim_hh1,
        "characters": result.dim_characters,
        "verdict": result.verdict,
    }


def _random_units(cat, rng):
    units = {}
    for h in cat.homs:
        numerator = rng.choice([-3, -2, -1, 1, 2, 3, 5])
        units[(h.source, h.target)] = f"{numerator}/{rng.choice([1, 2, 3])}"
    return units


def _dense_product(a, b, inner, cols):
    """Product of dense rows with explicit inner and column sizes"""
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)] for row in a]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_complete_groupoids(n):
    cat = CategoryService.build_complete_groupoid(n)
    cw = CwService.build_cw(cat)
    assert cw.counts() == (n, n * (n - 1), n * (n - 1) ** 2)
    pres = PresentationService.pi1_presentation(cw, "1")
    assert PresentationService.abelianization(pres) == AbelianInvariants(0, ())
    for field in (Field(0), Field(5)):
        assert PresentationService.character_space(pres, field) == []
        assert HochschildService.hh1(cat, field).dimension == 0
        assert HochschildService.verify_hurewicz_iso(cat, "1", field).verdict == ISOMORPHISM


@pytest.mark.parametrize("m,s", [(1, 0), (2, 0), (2, 1), (4, 2), (8, 4)])
def test_broken_ladders(m, s):
    cat = CategoryService.build_broken_ladder(m, s)
    cw = CwService.build_cw(cat)
    pres = PresentationService.pi1_presentation(cw, "a0")
    assert CwService.cellular_homology_h1(cw) == AbelianInvariants(1, ())
    assert PresentationService.abelianization(pres) == AbelianInvariants(1, ())
    for field in (Field(0), Field(7)):
        result = HochschildService.verify_hurewicz_iso(cat, "a0", field)
        assert (result.dim_characters, result.dim_hh1, result.rank) == (1, 1, 1)
        assert result.verdict == ISOMORPHISM


@pytest.mark.parametrize("name", sorted(SUITE))
def test_hurewicz_dimensions_agree(name):
    cat = SUITE[name]
    for field in (Field(0), Field(7)):
        result = HochschildService.verify_hurewicz_iso(cat, cat.objects[0], field)
        assert result.dim_characters == result.dim_hh1 == result.dim_cellular == result.rank
        assert result.verdict == ISOMORPHISM


@pytest.mark.parametrize("name", sorted(SUITE))
def test_trivial_grading_is_a_quotient(name):
    cat = SUITE[name]
    phi = GradingService.quotient_morphism(cat, GradingService.trivial_grading(cat), cat.objects[0])
    assert phi.ok


@pytest.mark.parametrize("m,s", [(1, 0), (2, 0), (2, 1), (4, 2)])
def test_ladder_gradings_are_quotients(m, s):
    cat = CategoryService.build_broken_ladder(m, s)
    z = integer_grading(cat, "a0")
    for grading in [z] + [reduce_grading(z, q) for q in (2, 3, 5)]:
        phi = GradingService.quotient_morphism(cat, grading, "a0")
        assert phi.relators_trivial and phi.surjective and phi.edgewise
        assert phi.literal is True


@pytest.mark.parametrize("name", sorted(SUITE))
def test_rescaling_invariance(name, rng):
    cat = SUITE[name]
    expected = _invariants(cat, Field(0))
    for _ in range(20):
        rescaled = CategoryService.rescale_basis(cat, _random_units(cat, rng))
        assert CategoryService.validate(rescaled) == []
        assert CwService.build_cw(rescaled) == CwService.build_cw(cat)
        assert _invariants(rescaled, Field(0)) == expected


@pytest.mark.parametrize("name", sorted(SUITE))
def test_object_order_invariance(name, rng):
    cat = SUITE[name]
    expected = _invariants(cat, Field(7))
    for _ in range(5):
        order = list(cat.objects)
        rng.shuffle(order)
        permuted = CategoryService.permute_objects(cat, order)
        found = _invariants(permuted, Field(7))
        assert found["abelianization"] == expected["abelianization"]
        assert (found["hh1"], found["characters"], found["verdict"]) == \
            (expected["hh1"], expected["characters"], expected["verdict"])
        assert found["counts"] == expected["counts"]


@pytest.mark.parametrize("name", sorted(SUITE))
def test_derivations_commute(name):
    cat = SUITE[name]
    basis = HochschildService.derivation_space(cat)
    for d1 in basis:
        for d2 in basis:
            assert HochschildService.lie_bracket(d1, d2).is_zero


@pytest.mark.parametrize("name", sorted(SUITE))
def test_constraint_rank_nullity(name):
    cat = SUITE[name]
    for field in FIELDS:
        constraints = HochschildService.derivation_constraints(cat, field)
        rank = ExactAlgebraService.rank(constraints)
        assert rank + len(ExactAlgebraService.nullspace_basis(constraints)) == len(cat.homs)


@pytest.mark.parametrize("name", sorted(SUITE))
def test_boundary_smith_forms_verify(name):
    cw = CwService.build_cw(SUITE[name])
    for m in CwService.boundary_matrices(cw):
        snf = ExactAlgebraService.smith_normal_form(m, verify=True)
        assert snf.U.shape == (m.shape[0], m.shape[0]) and snf.V.shape == (m.shape[1], m.shape[1])
        rows, cols = m.shape
        um = _dense_product(ExactAlgebraService.matrix_rows(snf.U), ExactAlgebraService.matrix_rows(m), rows, cols)
        umv = _dense_product(um, ExactAlgebraService.matrix_rows(snf.V), cols, cols)
        assert umv == ExactAlgebraService.matrix_rows(snf.D)
