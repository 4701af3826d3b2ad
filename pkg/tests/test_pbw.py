"""
PBW straightening in U(g)
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from src.foldlab.errors import InvalidInputError
from src.foldlab.linalg import eye, same, scaled
from src.foldlab.pbw import PBWAlgebra, words_of
from src.foldlab.reps import construct_module, module_representation


def test_straightening_sl2(sl2):
    U = PBWAlgebra(sl2)
    h, e, f = (U.generator(sl2.labels.index(x)) for x in ("h1", "E12", "E21"))
    assert e * f - f * e == h
    # normal order puts E before F
    assert f * e == e * f - h
    assert (h * e - e * h) == e * 2


def test_normal_words_are_sorted(sl3):
    U = PBWAlgebra(sl3)
    x = U.generator(7) * U.generator(2) * U.generator(5)
    assert all(list(w) == sorted(w) for w in x.terms)
    assert x.degree == 3


def test_symmetrize_two_factors(sl2):
    U = PBWAlgebra(sl2)
    e, f = [0, 1, 0], [0, 0, 1]
    sym = U.symmetrize([e, f])
    assert sym * 2 == U.linear(e) * U.linear(f) + U.linear(f) * U.linear(e)


@pytest.mark.parametrize("name", ["sl2", "sl3", "sp4"])
def test_casimir_is_central(name, request):
    g = request.getfixturevalue(name)
    U = PBWAlgebra(g)
    c = U.casimir()
    assert c.degree == 2
    for a in range(g.dim):
        assert c.bracket(U.generator(a)).is_zero()


def test_casimir_on_adjoint_of_sl2(sl2):
    U = PBWAlgebra(sl2)
    module = construct_module(sl2.datum, sl2.datum.weight_from_labels([2]))
    ops = module_representation(module, sl2)
    assert same(U.represent(U.casimir(), ops), scaled(eye(3), 4))


def test_sigma_fixes_the_casimir(sl3):
    U = PBWAlgebra(sl3)
    c = U.casimir()
    assert U.apply_linear(c, sl3.sigma_operator) == c


def test_proportionality_and_words(sl2):
    U = PBWAlgebra(sl2)
    x = U.generator(0) * U.generator(1)
    assert (x * 3).proportional_to(x) == 3
    assert U.generator(1).proportional_to(x) is None
    assert words_of([x, U.generator(2)]) == [(2,), (0, 1)]


def test_mixing_algebras_is_rejected(sl2, sl3):
    with pytest.raises(InvalidInputError):
        PBWAlgebra(sl2).one() + PBWAlgebra(sl3).one()
