import pytest

from schurian.exceptions import CompositionError, InvalidCategoryError, MalformedInputError, UnknownObjectError
from schurian.services.category_service import CategoryService, Identity
from schurian.services.exactalg import Field
from schurian.tests.conftest import commutative_square, two_cycle


def test_complete_groupoid_shape(groupoid3):
    assert groupoid3.objects == ("1", "2", "3")
    assert len(groupoid3.homs) == 6
    assert groupoid3.hom_by_pair[("1", "2")].name == "e_2_1"
    assert CategoryService.validate(groupoid3) == []


def test_compose_in_groupoid(groupoid2):
    back = CategoryService.compose(groupoid2, "e_1_2", "e_2_1")
    assert back.result == Identity("1")
    assert back.scalar == groupoid2.field.one
    # identities are units
    assert CategoryService.compose(groupoid2, "e_2_1", Identity("1")).result == "e_2_1"
    with pytest.raises(CompositionError):
        CategoryService.compose(groupoid2, "e_2_1", "e_2_1")


def test_broken_ladder_1_0(ladder10):
    assert ladder10.objects == ("a0", "a1", "b0", "b1")
    assert [h.name for h in ladder10.homs] == ["alpha0", "a0_to_b1", "beta1", "a1_to_b0", "alpha1", "gamma0"]
    assert CategoryService.compose(ladder10, "alpha0", "beta1").result == "a1_to_b0"
    assert CategoryService.compose(ladder10, "gamma0", "alpha0").result == "a0_to_b1"
    # composites through the break vanish
    assert CategoryService.compose(ladder10, "a0_to_b1", "beta1").is_zero
    assert CategoryService.compose(ladder10, "gamma0", "a1_to_b0").is_zero
    assert CategoryService.validate(ladder10) == []
    assert ladder10.metadata["crossingLevels"]["a1_to_b0"] == 0


@pytest.mark.parametrize("m,s", [(2, 0), (2, 1), (3, 1), (4, 2)])
def test_broken_ladders_are_valid(m, s):
    cat = CategoryService.build_broken_ladder(m, s)
    assert len(cat.objects) == 2 * (m + 1)
    assert CategoryService.validate(cat) == []
    assert CategoryService.is_connected(cat)


@pytest.mark.parametrize("m,s", [(0, 0), (2, 2), (2, -1)])
def test_broken_ladder_parameters(m, s):
    with pytest.raises(MalformedInputError):
        CategoryService.build_broken_ladder(m, s)


def test_associativity_violation_reported():
    cat = CategoryService.build_category(
        Field(),
        ["x", "y", "z", "w"],
        [("f", "x", "y"), ("g", "y", "z"), ("h", "z", "w"), ("gf", "x", "z"), ("hg", "y", "w"), ("hgf", "x", "w")],
        {("g", "f"): 1, ("h", "g"): 1, ("h", "gf"): 1, ("hg", "f"): 2},
    )
    violations = CategoryService.validate(cat)
    assert [v.kind for v in violations] == ["associativity"]
    assert violations[0].morphisms == ("h", "g", "f")
    with pytest.raises(InvalidCategoryError):
        CategoryService.require_valid(cat)


def test_pattern_closure_violation():
    cat = CategoryService.build_category(
        Field(), ["x", "y", "z"], [("f", "x", "y"), ("g", "y", "z")], {("g", "f"): 1}
    )
    assert [v.kind for v in CategoryService.validate(cat)] == ["pattern-closure"]


@pytest.mark.parametrize("homs,message", [
    ([("f", "x", "x")], "endomorphism"),
    ([("f", "x", "y"), ("g", "x", "y")], "one-dimensional"),
    ([("f", "x", "nowhere")], "undeclared object"),
])
def test_structural_errors(homs, message):
    with pytest.raises(MalformedInputError, match=message):
        CategoryService.build_category(Field(), ["x", "y"], homs, {})


def test_zero_scalars_are_dropped():
    cat = CategoryService.build_category(
        Field(), ["x", "y", "z"], [("f", "x", "y"), ("g", "y", "z"), ("h", "x", "z")], {("g", "f"): "0"}
    )
    assert cat.constants == {}


def test_walks(ladder10):
    w = ladder10.walk("a1", [("beta1", 1), ("alpha0", 1), ("a1_to_b0", -1)])
    assert w.is_closed
    assert len(w) == 3
    assert w.inverse().steps == (("a1_to_b0", 1), ("alpha0", -1), ("beta1", -1))
    assert w.then(w.inverse()).end == "a1"
    with pytest.raises(CompositionError):
        ladder10.walk("a0", [("gamma0", 1)])
    with pytest.raises(UnknownObjectError):
        ladder10.walk("c0", [])


def test_components_and_disjoint_union(groupoid2):
    union = CategoryService.disjoint_union(groupoid2, two_cycle())
    assert not CategoryService.is_connected(union)
    assert CategoryService.components(union) == [["L.1", "L.2"], ["R.x", "R.y"]]
    assert CategoryService.validate(union) == []


def test_disjoint_union_needs_same_field(groupoid2):
    other = CategoryService.build_complete_groupoid(2, Field(5))
    with pytest.raises(MalformedInputError):
        CategoryService.disjoint_union(groupoid2, other)


def test_rescale_keeps_validity():
    cat = commutative_square()
    rescaled = CategoryService.rescale_basis(cat, {("x", "y"): 2, ("x", "w"): "-1/3"})
    assert CategoryService.validate(rescaled) == []
    # c'(q, p) = 1 * 1 * 2 / (-1/3)
    assert rescaled.constant("q", "p") == cat.field(-6)
    with pytest.raises(MalformedInputError):
        CategoryService.rescale_basis(cat, {("x", "y"): 0})
    with pytest.raises(MalformedInputError):
        CategoryService.rescale_basis(cat, {("w", "x"): 1})


def test_rescale_groupoid_bigons(groupoid2):
    rescaled = CategoryService.rescale_basis(groupoid2, {("1", "2"): 3})
    assert rescaled.constant("e_1_2", "e_2_1") == groupoid2.field(3)
    assert CategoryService.validate(rescaled) == []


def test_permute_objects(ladder10):
    permuted = CategoryService.permute_objects(ladder10, ["b1", "a1", "b0", "a0"])
    assert permuted.objects[0] == "b1"
    assert permuted.homs == ladder10.homs
    with pytest.raises(MalformedInputError):
        CategoryService.permute_objects(ladder10, ["a0", "a1"])
