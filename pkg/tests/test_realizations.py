"""
Matrix realizations of the classical algebras and their pinned automorphisms
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from src.foldlab.errors import InvalidInputError
from src.foldlab.linalg import eye, same
from src.foldlab.realizations import folded_realization, get_realization, realization_for_cartan
from src.foldlab.rootdata import cartan_entries


@pytest.mark.parametrize(
    "name,dim,rank",
    [("sl2", 3, 1), ("sl3", 8, 2), ("sl4", 15, 3), ("so3", 3, 1), ("sp4", 10, 2), ("so5", 10, 2)],
)
def test_dimensions(name, dim, rank):
    g = get_realization(name)
    assert g.dim == dim
    assert g.rank == rank
    assert len(g.borel_indices) == (dim + rank) // 2


def test_unknown_algebra():
    with pytest.raises(InvalidInputError):
        get_realization("g2")


def test_sl4_checks(sl4):
    checks = sl4.check()
    assert checks == {
        "closure": True,
        "kappa_invariant": True,
        "sigma_bracket": True,
        "sigma_kappa": True,
        "sigma_pinning": True,
    }


def test_fixed_subalgebra_checks(sp4):
    assert all(sp4.check().values())
    assert sp4.cartan.entries == cartan_entries("C", 2)
    assert sp4.parent == "sl4"


def test_sigma_is_an_involution(sl4):
    s = sl4.sigma_operator
    assert same(s * s, eye(sl4.dim))
    assert sl4.sigma.perm == [3, 2, 1]


def test_folded_realizations(sl2, sl4):
    assert folded_realization(sl4).name == "sp4"
    assert folded_realization(get_realization("sl5")).name == "so5"
    assert folded_realization(sl2) is sl2
    with pytest.raises(InvalidInputError):
        folded_realization(get_realization("sp4"))


def test_grading_by_rho_vee(sl3):
    degrees = dict(zip(sl3.labels, sl3.degrees))
    assert degrees["h1"] == 0
    assert degrees["E12"] == 1
    assert degrees["E13"] == 2
    assert degrees["E31"] == -2
    assert sl3.max_degree == 2


def test_cartan_element_inputs(sl3):
    from_diagonal = sl3.cartan_element([1, 0, -1])
    from_coroots = sl3.cartan_element([1, 1])
    assert same(from_diagonal, from_coroots)
    with pytest.raises(InvalidInputError):
        sl3.cartan_element([1, 2, 3, 4])


def test_realization_for_cartan():
    g, node_map = realization_for_cartan(cartan_entries("C", 2))
    assert g.name == "sp4"
    assert node_map == (0, 1)
    g, _ = realization_for_cartan(cartan_entries("B", 2))
    assert g.name == "so5"
    with pytest.raises(InvalidInputError):
        realization_for_cartan(cartan_entries("G", 2))
