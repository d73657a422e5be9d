from itertools import permutations, product

import pytest

from schurian.exceptions import DisconnectedError, MalformedInputError, UnknownObjectError
from schurian.services.category_service import CategoryService
from schurian.services.cw_service import CwService
from schurian.services.exactalg import AbelianInvariants, Field
from schurian.services.presentation_service import (
    GroupPresentation,
    PresentationService,
    cyclically_reduce,
    free_reduce,
    inverse_word,
    word_from_strings,
    word_to_strings,
)
from schurian.tests.conftest import two_cycle

S3 = list(permutations(range(3)))
S3_IDENTITY = (0, 1, 2)


def _s3_image(word, lookup):
    result = S3_IDENTITY
    for g, e in word:
        p = lookup[g]
        if e == -1:
            p = tuple(sorted(range(3), key=p.__getitem__))
        result = tuple(result[p[i]] for i in range(3))
    return result


def _homs_into_s3(pres):
    """Number of homomorphisms from the presented group to S3"""
    count = 0
    for images in product(S3, repeat=len(pres.generators)):
        lookup = dict(zip(pres.generators, images))
        if all(_s3_image(r, lookup) == S3_IDENTITY for r in pres.relators):
            count += 1
    return count


def test_word_algebra():
    word = (("a", 1), ("b", 1), ("b", -1), ("c", -1))
    assert free_reduce(word) == (("a", 1), ("c", -1))
    assert inverse_word((("a", 1), ("c", -1))) == (("c", 1), ("a", -1))
    assert cyclically_reduce((("a", 1), ("b", 1), ("a", -1))) == (("b", 1),)
    assert word_to_strings((("a", 1), ("b", -1))) == ["a", "b^-1"]
    assert word_from_strings(["a", "b^-1"]) == (("a", 1), ("b", -1))


def test_groupoid_2_presentation(groupoid2):
    pres = PresentationService.pi1_presentation(CwService.build_cw(groupoid2), "1")
    assert pres.tree.edges == ("e_2_1",)
    assert pres.generators == ("e_1_2",)
    assert pres.relators == ((("e_1_2", 1),), (("e_1_2", 1),))
    assert PresentationService.abelianization(pres) == AbelianInvariants(0, ())


def test_ladder_1_0_presentation(ladder10):
    cw = CwService.build_cw(ladder10)
    pres = PresentationService.pi1_presentation(cw, "a0")
    assert pres.tree.edges == ("alpha0", "a0_to_b1", "beta1")
    assert pres.generators == ("a1_to_b0", "alpha1", "gamma0")
    assert pres.relators == ((("a1_to_b0", -1),), (("gamma0", 1),))
    assert PresentationService.abelianization(pres) == AbelianInvariants(1, ())


def test_tree_paths_start_at_basepoint(ladder10):
    tree = PresentationService.spanning_tree(CwService.build_cw(ladder10), "a0")
    assert tree.paths["a0"].steps == ()
    assert tree.paths["a1"].steps == (("beta1", -1),)
    assert all(p.start == "a0" and p.end == x for x, p in tree.paths.items())


def test_spanning_tree_errors(groupoid2):
    with pytest.raises(UnknownObjectError):
        PresentationService.spanning_tree(CwService.build_cw(groupoid2), "7")
    union = CategoryService.disjoint_union(groupoid2, two_cycle())
    with pytest.raises(DisconnectedError):
        PresentationService.spanning_tree(CwService.build_cw(union), "L.1")


def test_edge_loops_and_words(ladder10):
    cw = CwService.build_cw(ladder10)
    pres = PresentationService.pi1_presentation(cw, "a0")
    loop = PresentationService.edge_loop(cw, pres.tree, "alpha1")
    assert loop.is_closed and loop.start == "a0"
    assert PresentationService.word_of_walk(loop, pres.tree) == (("alpha1", 1),)
    # tree edges give the empty word
    tree_loop = PresentationService.edge_loop(cw, pres.tree, "beta1")
    assert PresentationService.word_of_walk(tree_loop, pres.tree) == ()
    with pytest.raises(MalformedInputError):
        PresentationService.word_of_walk(ladder10.edge_walk("alpha1"), pres.tree)


def test_character_space(ladder10, q, gf7):
    pres = PresentationService.pi1_presentation(CwService.build_cw(ladder10), "a0")
    for field in (q, gf7):
        basis = PresentationService.character_space(pres, field)
        assert len(basis) == 1
        chi = basis[0]
        assert chi.value("alpha1") == field.one
        assert all(chi.evaluate(r) == field.zero for r in pres.relators)


def test_character_space_sees_torsion():
    # <a, b | a^2, b^3>
    pres = GroupPresentation(("a", "b"), ((("a", 1), ("a", 1)), (("b", 1), ("b", 1), ("b", 1))))
    assert PresentationService.abelianization(pres) == AbelianInvariants(0, (6,))
    assert len(PresentationService.character_space(pres, Field())) == 0
    assert len(PresentationService.character_space(pres, Field(2))) == 1
    assert len(PresentationService.character_space(pres, Field(3))) == 1


def test_simplify_groupoid(groupoid2):
    pres = PresentationService.pi1_presentation(CwService.build_cw(groupoid2), "1")
    simple = PresentationService.simplify_presentation(pres)
    assert simple.generators == ()
    assert simple.relators == ()


def test_simplify_ladder(ladder10):
    pres = PresentationService.pi1_presentation(CwService.build_cw(ladder10), "a0")
    simple = PresentationService.simplify_presentation(pres)
    assert simple.generators == ("alpha1",)
    assert simple.relators == ()


def test_simplify_keeps_torsion():
    pres = GroupPresentation(("a", "b"), ((("a", 1), ("b", -1)), (("b", 1), ("b", 1))))
    simple = PresentationService.simplify_presentation(pres)
    assert len(simple.generators) == 1
    assert PresentationService.abelianization(simple) == AbelianInvariants(0, (2,))


def test_simplify_keeps_nonabelian_group():
    pres = GroupPresentation(
        ("a", "b", "c"),
        (
            word_from_strings(["a^-1", "c", "b", "a", "b^-1"]),
            word_from_strings(["c^-1", "c^-1", "b^-1"]),
        ),
    )
    simple = PresentationService.simplify_presentation(pres)
    assert simple.generators == ("a", "b")
    assert simple.relators == (word_from_strings(["b^-1", "a^-1", "b", "a", "b^-1"]),)
    assert _homs_into_s3(pres) == _homs_into_s3(simple) == 12


def test_simplify_random_presentations(rng):
    letters = [(g, e) for g in ("a", "b", "c") for e in (1, -1)]
    for _ in range(30):
        relators = tuple(
            free_reduce([rng.choice(letters) for _ in range(rng.randint(3, 6))]) for _ in range(2)
        )
        pres = GroupPresentation(("a", "b", "c"), relators)
        simple = PresentationService.simplify_presentation(pres)
        assert _homs_into_s3(simple) == _homs_into_s3(pres)


def test_two_cycle_is_free(q):
    pres = PresentationService.pi1_presentation(CwService.build_cw(two_cycle()), "x")
    assert pres.generators == ("v",)
    assert pres.relators == ()
    assert len(PresentationService.character_space(pres, q)) == 1
