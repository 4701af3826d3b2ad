"""
Diagram automorphisms, folded root data and the golden folding table
"""

import itertools
import json
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from config.settings import DATA_DIR
from src.foldlab.errors import InvalidInputError
from src.foldlab.folding import (
    classify_isogeny,
    embed_dominant,
    fold,
    invariant_fold,
    is_sigma_fixed,
    orbit_coroots,
    restrict_weight,
    table_check,
    validate_automorphism,
)
from src.foldlab.rootdata import build_root_datum

with open(os.path.join(DATA_DIR, "folding_table.json"), "r", encoding="utf-8") as _handle:
    TABLE_ROWS = json.load(_handle)["rows"]


def _fold(series, rank, isogeny, perm):
    datum = build_root_datum(series, rank, isogeny)
    return datum, fold(datum, validate_automorphism(perm, datum))


def test_validate_automorphism():
    datum = build_root_datum("A", 3)
    sigma = validate_automorphism("3,2,1", datum)
    assert sigma.order == 2
    assert sigma.perm == [3, 2, 1]
    with pytest.raises(InvalidInputError):
        validate_automorphism([2, 1, 3], datum)
    with pytest.raises(InvalidInputError):
        validate_automorphism([1, 1, 2], datum)


def test_triality_has_order_three():
    datum = build_root_datum("D", 4)
    sigma = validate_automorphism([3, 2, 4, 1], datum)
    assert sigma.order == 3
    assert sorted(len(o.nodes) for o in sigma.orbits(datum.cartan)) == [1, 3]


def test_fold_A3_is_C2_simply_connected():
    _, folded = _fold("A", 3, "sc", [3, 2, 1])
    assert (folded.series, folded.rank) == ("C", 2)
    iso = classify_isogeny(folded)
    assert iso.simply_connected and not iso.adjoint
    assert iso.doubled_orbits == 0


def test_fold_A4_doubles_a_coroot():
    _, folded = _fold("A", 4, "sc", [4, 3, 2, 1])
    assert (folded.series, folded.rank) == ("B", 2)
    iso = classify_isogeny(folded)
    assert iso.adjoint
    assert iso.coroot_index == 2
    assert iso.doubled_orbits == 1


@pytest.mark.parametrize("rank,perm", [(2, [2, 1]), (4, [4, 3, 2, 1])])
def test_adjacent_pair_coroot_is_twice_the_orbit_sum(rank, perm):
    _, folded = _fold("A", rank, "sc", perm)
    rows = orbit_coroots(folded)
    assert all(row["match"] for row in rows)
    doubled = [row for row in rows if row["adjacent_pair"]]
    assert len(doubled) == 1
    assert classify_isogeny(folded).coroot_index == 2


def test_fold_is_trivial_for_identity():
    datum, folded = _fold("B", 3, "sc", "")
    assert folded.cartan.entries == datum.cartan.entries
    assert classify_isogeny(folded).simply_connected


@pytest.mark.parametrize("row", TABLE_ROWS, ids=[r["name"] for r in TABLE_ROWS])
def test_golden_table_row(row):
    result = table_check(row)
    assert result["passed"], result["computed"]


def test_dual_of_fold_matches_fold_of_dual_type():
    """(G_sigma)^vee has the type of (G^vee)_sigma for A3"""
    datum, folded = _fold("A", 3, "sc", [3, 2, 1])
    dual = datum.dual()
    folded_of_dual = fold(dual, validate_automorphism([3, 2, 1], dual))
    assert folded.dual().series == "B"
    assert folded_of_dual.series == "C"


def test_embed_dominant_spreads_labels_over_orbits():
    _, folded = _fold("A", 3, "sc", [3, 2, 1])
    weight = folded.weight_from_labels([1, 0])
    assert embed_dominant(weight).int_labels() == (1, 0, 1)
    with pytest.raises(InvalidInputError):
        embed_dominant(folded.weight_from_labels([-1, 0], allow_rational=True))


def test_restriction_to_invariant_fold():
    datum = build_root_datum("A", 3)
    sigma = validate_automorphism([3, 2, 1], datum)
    folded = invariant_fold(datum, sigma)
    fixed = datum.weight_from_labels([1, 0, 1])
    assert is_sigma_fixed(fixed, sigma)
    assert restrict_weight(fixed, folded).int_labels() == (1, 0)
    moved = datum.weight_from_labels([1, 0, 0])
    assert not is_sigma_fixed(moved, sigma)
    with pytest.raises(InvalidInputError):
        restrict_weight(moved, folded)


@pytest.mark.parametrize("row", TABLE_ROWS, ids=[r["name"] for r in TABLE_ROWS])
def test_embed_dominant_is_a_section_of_restriction(row):
    """restrict_weight(embed_dominant(w)) == w for dominant w in X^sigma"""
    datum = build_root_datum(row["type"], int(row["rank"]), row["isogeny"])
    sigma = validate_automorphism(row["perm"], datum)
    folded = invariant_fold(datum, sigma)
    checked = 0
    for labels in itertools.product(range(3), repeat=folded.rank):
        try:
            weight = folded.weight_from_labels(labels)
        except InvalidInputError:
            continue
        lifted = embed_dominant(weight)
        assert lifted.is_dominant()
        assert is_sigma_fixed(lifted, sigma)
        assert restrict_weight(lifted, folded) == weight
        checked += 1
    assert checked > 1
