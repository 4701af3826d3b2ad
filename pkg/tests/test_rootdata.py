"""
Root data, Cartan matrices and weights
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from src.foldlab.errors import InvalidInputError
from src.foldlab.rootdata import (
    ADJOINT,
    SIMPLY_CONNECTED,
    build_root_datum,
    cartan_entries,
    coweyl_vector,
    dim_borel,
    half_sum_positive_roots,
    identify_cartan_type,
    normalize_isogeny,
    parts_of_weight,
    positive_roots,
    reflect,
    weight_from_parts,
    weyl_orbit_dominant_rep,
    weyl_vector,
)


def test_bourbaki_conventions():
    """a_ij = <alpha_j, alpha_i^vee>: B2 has alpha_2 short, C2 has alpha_2 long"""
    assert cartan_entries("B", 2) == ((2, -1), (-2, 2))
    assert cartan_entries("C", 2) == ((2, -2), (-1, 2))
    assert cartan_entries("G", 2) == ((2, -3), (-1, 2))
    assert cartan_entries("A", 3) == ((2, -1, 0), (-1, 2, -1), (0, -1, 2))


@pytest.mark.parametrize("series,rank", [("D", 3), ("B", 1), ("C", 1), ("E", 5), ("F", 3), ("G", 3), ("H", 3), ("A", 0)])
def test_invalid_types_rejected(series, rank):
    with pytest.raises(InvalidInputError):
        build_root_datum(series, rank)


def test_isogeny_aliases():
    assert normalize_isogeny("sc") == SIMPLY_CONNECTED
    assert normalize_isogeny("AD") == ADJOINT
    with pytest.raises(InvalidInputError):
        normalize_isogeny("half-spin")


@pytest.mark.parametrize(
    "series,rank,positive,borel",
    [("A", 3, 6, 9), ("B", 2, 4, 6), ("G", 2, 6, 8), ("D", 4, 12, 16), ("E", 6, 36, 42), ("F", 4, 24, 28)],
)
def test_positive_roots_and_borel(series, rank, positive, borel):
    datum = build_root_datum(series, rank)
    assert len(positive_roots(datum)) == positive
    assert dim_borel(datum) == borel


def test_sc_and_adjoint_lattices():
    sc = build_root_datum("A", 2, "sc")
    ad = build_root_datum("A", 2, "ad")
    assert sc.recovered_cartan() == sc.cartan.entries
    assert ad.recovered_cartan() == ad.cartan.entries
    # omega_1 lives in the sc lattice only
    assert sc.weight_from_labels([1, 0]).is_integral
    with pytest.raises(InvalidInputError):
        ad.weight_from_labels([1, 0])


def test_dual_swaps_type_and_isogeny():
    b2 = build_root_datum("B", 2, "sc")
    dual = b2.dual()
    assert dual.series == "C" and dual.rank == 2
    assert dual.isogeny == ADJOINT
    assert dual.dual().series == "B"
    assert dual.recovered_cartan() == dual.cartan.entries


def test_identify_prefers_identity_node_map():
    assert identify_cartan_type(((2, -1), (-2, 2))) == ("B", 2, (0, 1))
    assert identify_cartan_type(((2, -2), (-1, 2))) == ("C", 2, (0, 1))
    series, rank, node_map = identify_cartan_type(((2, -1, -1), (-1, 2, 0), (-1, 0, 2)))
    assert (series, rank) == ("A", 3)
    assert node_map[0] == 1


def test_identify_rejects_disconnected():
    with pytest.raises(InvalidInputError):
        identify_cartan_type(((2, 0), (0, 2)))


def test_reflection_to_dominant():
    datum = build_root_datum("A", 2)
    mu = datum.weight_from_labels([-1, 0])
    assert reflect(mu, 0).int_labels() == (1, -1)
    assert weyl_orbit_dominant_rep(mu).int_labels() == (0, 1)


def test_partition_coordinates():
    datum = build_root_datum("A", 3)
    weight = weight_from_parts(datum, (3, 1))
    assert weight.int_labels() == (2, 1, 0)
    assert parts_of_weight(weight) == (3, 1, 0, 0)
    with pytest.raises(InvalidInputError):
        weight_from_parts(build_root_datum("B", 2), (1,))


@pytest.mark.parametrize("series,rank", [("A", 3), ("B", 3), ("C", 2), ("G", 2)])
def test_rho_is_half_the_positive_roots(series, rank):
    datum = build_root_datum(series, rank, ADJOINT)
    assert weyl_vector(datum).labels == half_sum_positive_roots(datum).labels
    assert all(x == 1 for x in coweyl_vector(datum).labels)
