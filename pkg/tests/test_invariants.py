"""
Invariant polynomials, Kostant sections, shift-of-argument families, compatible pairs
"""

import os
import random
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest
from sympy import Rational

from src.foldlab.errors import InvalidInputError
from src.foldlab.gaudin import sample_regular_chi
from src.foldlab.invariants import (
    chevalley_generators,
    chevalley_report,
    chi_from_values,
    compatible_pair,
    coordinate_ring,
    generic_charpoly,
    hc_canonical_check,
    hc_quadratic,
    invariance_check,
    mf_family,
    principal_triple,
    regular,
    section_point,
    sigma_section_check,
)
from src.foldlab.realizations import get_realization


@pytest.mark.parametrize(
    "name,degrees",
    [("sl2", [2]), ("sl3", [2, 3]), ("sl4", [2, 3, 4]), ("sl5", [2, 3, 4, 5]), ("sp4", [2, 4]), ("so5", [2, 4])],
)
def test_chevalley_degrees_sum_to_dim_b(name, degrees):
    report = chevalley_report(get_realization(name))
    assert sorted(report["degrees"]) == degrees
    assert report["degree_sum"] == report["dim_b"]
    assert report["passed"]


def test_generators_are_invariant(sl3):
    for p in chevalley_generators(sl3):
        assert invariance_check(sl3, p.poly)


def test_principal_triple_sl3(sl3):
    section = principal_triple(sl3)
    assert all(section.check().values())
    assert section.exponents == (1, 2)


def test_section_point_recovers_values(sl4):
    section = principal_triple(sl4)
    generators = chevalley_generators(sl4)
    values = [Rational(3), Rational(-1, 2), Rational(5)]
    point = section_point(section, values, generators)
    assert [p.evaluate(point) for p in generators] == values


@pytest.mark.parametrize("name", ["sl3", "sl4", "sl5"])
def test_sigma_fixed_section(name):
    report = sigma_section_check(get_realization(name))
    assert report["passed"]
    assert report["coordinate_change_invertible"]


def test_regularity(sl3):
    assert regular(sl3, chi_from_values(sl3, [1, 0, -1]))
    assert not regular(sl3, [0] * sl3.dim)
    assert not regular(sl3, chi_from_values(sl3, [1, 1, -2]))


def test_mf_family_full_rank_at_regular_chi(sl3):
    chi, _ = sample_regular_chi(sl3, random.Random(7))
    family = mf_family(sl3, chi, seed=7)
    payload = family.to_dict()
    assert family.count == payload["dim_b"] == 5
    assert family.jacobian_rank == 5
    assert payload["passed"]


def test_mf_rank_drops_at_zero(sl3):
    family = mf_family(sl3, [0] * sl3.dim, seed=7)
    assert family.jacobian_rank < 5
    assert not family.regular


def test_mf_rejects_wrong_length(sl3):
    with pytest.raises(InvalidInputError):
        mf_family(sl3, [1, 2, 3])


@pytest.mark.parametrize("policy", ["zero", "random"])
def test_compatible_pairs(sl4, policy):
    pair = compatible_pair(sl4, policy, seed=11)
    assert pair.passed
    assert pair.folded == "sp4"
    assert pair.regular == (policy == "random")


def test_compatible_pair_rejects_moved_chi(sl4):
    with pytest.raises(InvalidInputError):
        compatible_pair(sl4, "explicit", chi=[1, 2, 3])


def test_casimir_on_sl2_module(sl2):
    report = hc_quadratic(sl2, [2])
    assert report["casimir"] == 4
    assert report["eigenvector"] and report["passed"]


def test_casimir_against_folded_dual(sl3):
    report = hc_canonical_check(sl3, [(0, 0), (1, 1), (2, 2)])
    assert report["passed"]
    with pytest.raises(InvalidInputError):
        hc_canonical_check(sl3, [(0, 0), (1, 1)])


@pytest.mark.parametrize("dim", [1, 3, 8])
def test_coordinate_ring_unpacks_into_ring_and_generators(dim):
    R, xs = coordinate_ring(dim)
    assert len(xs) == dim == R.ngens
    assert [str(x) for x in xs] == [f"x{a + 1}" for a in range(dim)]


def test_generic_charpoly_of_sl2():
    """det(t - X) on sl2 is t^2 + c_2 with c_1 = 0 and c_2 quadratic"""
    g = get_realization("sl2")
    coefficients = generic_charpoly(g)
    assert len(coefficients) == 2
    assert coefficients[0] == 0
    assert {sum(m) for m in coefficients[1].monoms()} == {2}
    assert invariance_check(g, coefficients[1])
