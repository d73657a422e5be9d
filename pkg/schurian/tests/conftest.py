import random
from math import gcd, lcm
from pathlib import Path

import pytest

from schurian.services.category_service import CategoryService
from schurian.services.cw_service import CwService
from schurian.services.exactalg import Field
from schurian.services.grading_service import FgAbelianGroup, FiniteGroup, Grading, GradingService
from schurian.services.presentation_service import PresentationService

DATA_DIR = Path(__file__).parent / "data"


def arrow():
    """x -> y"""
    return CategoryService.build_category(Field(), ["x", "y"], [("f", "x", "y")], {})


def point():
    return CategoryService.build_category(Field(), ["x"], [], {})


def commutative_square(field=None):
    """Two paths x -> w, both composing to the diagonal"""
    return CategoryService.build_category(
        field or Field(),
        ["x", "y", "z", "w"],
        [("p", "x", "y"), ("q", "y", "w"), ("r", "x", "z"), ("s", "z", "w"), ("d", "x", "w")],
        {("q", "p"): 1, ("s", "r"): "3/2"},
    )


def zero_square(field=None):
    """Square whose lower path composes to zero"""
    return CategoryService.build_category(
        field or Field(),
        ["x", "y", "z", "w"],
        [("p", "x", "y"), ("q", "y", "w"), ("r", "x", "z"), ("s", "z", "w"), ("d", "x", "w")],
        {("q", "p"): 2, ("s", "r"): 0},
    )


def two_cycle():
    """x -> y -> x with both composites zero"""
    return CategoryService.build_category(Field(), ["x", "y"], [("u", "x", "y"), ("v", "y", "x")], {})


def transitive_a3():
    """x -> y -> z with the composite equal to -1 times x -> z"""
    return CategoryService.build_category(
        Field(),
        ["x", "y", "z"],
        [("f", "x", "y"), ("g", "y", "z"), ("h", "x", "z")],
        {("g", "f"): -1},
    )


def open_triangle():
    """x -> y -> z and x -> z with a zero composite"""
    return CategoryService.build_category(
        Field(),
        ["x", "y", "z"],
        [("f", "x", "y"), ("g", "y", "z"), ("h", "x", "z")],
        {("g", "f"): 0},
    )


# (builder, free rank of H1) for small hand-made categories
HANDMADE = {
    "point": (point, 0),
    "arrow": (arrow, 0),
    "commutative_square": (commutative_square, 0),
    "zero_square": (zero_square, 1),
    "two_cycle": (two_cycle, 1),
    "transitive_a3": (transitive_a3, 0),
    "open_triangle": (open_triangle, 1),
}

LADDER_PARAMETERS = [(1, 0), (2, 0), (2, 1), (4, 2)]


def suite():
    """Named categories over Q: groupoids, small ladders and the hand-made ones"""
    cats = {f"groupoid_{n}": CategoryService.build_complete_groupoid(n) for n in (2, 3, 4)}
    cats.update({f"ladder_{m}_{s}": CategoryService.build_broken_ladder(m, s) for m, s in LADDER_PARAMETERS})
    cats.update({name: builder() for name, (builder, _) in HANDMADE.items()})
    return cats


@pytest.fixture
def q():
    return Field(0)


@pytest.fixture
def gf5():
    return Field(5)


@pytest.fixture
def gf7():
    return Field(7)


@pytest.fixture
def groupoid2():
    return CategoryService.build_complete_groupoid(2)


@pytest.fixture
def groupoid3():
    return CategoryService.build_complete_groupoid(3)


@pytest.fixture
def ladder10():
    return CategoryService.build_broken_ladder(1, 0)


@pytest.fixture
def ladder21():
    return CategoryService.build_broken_ladder(2, 1)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA_DIR


def integer_grading(cat, base):
    """Z-grading χ∘deg_u for a primitive integral character χ of the fundamental group"""
    field = Field()
    cw = CwService.build_cw(cat)
    universal = GradingService.universal_grading(cw, base)
    pres = universal.group.presentation
    chi = PresentationService.character_space(pres, field)[0]
    K = field.domain
    scale = lcm(*(int(K.denom(v)) for v in chi.values))
    values = [int(K.numer(v * scale)) for v in chi.values]
    divisor = gcd(*values)
    lookup = {g: v // divisor for g, v in zip(pres.generators, values)}
    group = FgAbelianGroup(1)
    degrees = {name: (sum(lookup[g] * e for g, e in word),) for name, word in universal.degrees.items()}
    return Grading(group, degrees)


def reduce_grading(grading, modulus):
    """Image of a Z-grading in Z/modulus"""
    group = FiniteGroup.cyclic(modulus)
    return Grading(group, {name: str(d[0] % modulus) for name, d in grading.degrees.items()})
