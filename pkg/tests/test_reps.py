"""
Weight multiplicities, explicit modules and twining traces
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from src.foldlab.acceptance import invariant_weights
from src.foldlab.errors import InvalidInputError
from src.foldlab.folding import invariant_fold, validate_automorphism
from src.foldlab.linalg import trace
from src.foldlab.reps import (
    construct_module,
    freudenthal,
    module_representation,
    sigma_on_module,
    twining_report,
    weyl_character_product,
    weyl_dim,
)
from src.foldlab.rootdata import build_root_datum


@pytest.mark.parametrize(
    "series,rank,labels,dim",
    [
        ("A", 2, (1, 1), 8),
        ("A", 3, (0, 1, 0), 6),
        ("A", 3, (1, 0, 1), 15),
        ("B", 2, (1, 0), 5),
        ("B", 2, (0, 1), 4),
        ("C", 2, (1, 0), 4),
        ("G", 2, (1, 0), 7),
        ("G", 2, (0, 1), 14),
        ("F", 4, (0, 0, 0, 1), 26),
        ("E", 6, (1, 0, 0, 0, 0, 0), 27),
    ],
)
def test_weyl_dimension(series, rank, labels, dim):
    datum = build_root_datum(series, rank)
    assert weyl_dim(datum, datum.weight_from_labels(labels)) == dim


def test_weyl_dimension_needs_dominant_weight():
    datum = build_root_datum("A", 2)
    with pytest.raises(InvalidInputError):
        weyl_dim(datum, datum.weight_from_labels([-1, 1]))


def test_freudenthal_adjoint_of_sl3():
    datum = build_root_datum("A", 2)
    diagram = freudenthal(datum, datum.weight_from_labels([1, 1]))
    assert diagram.total_dim == 8
    assert diagram.by_labels()[(0, 0)] == 2
    assert diagram.by_labels()[(1, 1)] == 1
    assert diagram.to_dict()["weights"][0]["labels"] == [1, 1]


def test_character_product_sl3():
    """3 x 3bar = 8 + 1"""
    datum = build_root_datum("A", 2)
    product = weyl_character_product(datum, datum.weight_from_labels([1, 0]), datum.weight_from_labels([0, 1]))
    assert product == {(1, 1): 1, (0, 0): 1}


def test_module_relations_and_multiplicities():
    datum = build_root_datum("B", 2)
    module = construct_module(datum, datum.weight_from_labels([1, 1]))
    assert module.dim == weyl_dim(datum, module.highest)
    assert all(module.check_relations().values())
    expected = freudenthal(datum, module.highest).by_labels()
    assert module.multiplicities() == expected


def test_dimension_cap():
    datum = build_root_datum("A", 3)
    with pytest.raises(InvalidInputError):
        construct_module(datum, datum.weight_from_labels([1, 0, 1]), cap=10)


def test_sigma_needs_invariant_highest_weight():
    datum = build_root_datum("A", 2)
    sigma = validate_automorphism([2, 1], datum)
    module = construct_module(datum, datum.weight_from_labels([1, 0]))
    with pytest.raises(InvalidInputError):
        sigma_on_module(module, sigma)


@pytest.mark.parametrize("labels", [(1, 1), (2, 2), (0, 0)])
def test_twining_A2(labels):
    datum = build_root_datum("A", 2)
    sigma = validate_automorphism([2, 1], datum)
    module = construct_module(datum, datum.weight_from_labels(labels))
    report = twining_report(module, sigma)
    assert report.passed
    assert report.global_trace == report.folded_dim


def test_twining_A3_omega2():
    datum = build_root_datum("A", 3)
    sigma = validate_automorphism([3, 2, 1], datum)
    module = construct_module(datum, datum.weight_from_labels([0, 1, 0]))
    s = sigma_on_module(module, sigma)
    report = twining_report(module, sigma, invariant_fold(datum, sigma), s)
    assert report.passed
    assert int(trace(s)) == report.folded_dim == 4
    assert all(row["trace"] == row["folded_multiplicity"] for row in report.rows)


def test_invariant_weight_enumeration():
    datum = build_root_datum("A", 2)
    sigma = validate_automorphism([2, 1], datum)
    weights = list(invariant_weights(datum, sigma, 27))
    # (k, k) has dimension (k + 1)^3
    assert weights == [(0, 0), (1, 1), (2, 2)]


def test_module_representation_lifts_every_basis_element(sl3):
    datum = sl3.datum
    module = construct_module(datum, datum.weight_from_labels([1, 0]))
    ops = module_representation(module, sl3)
    assert len(ops) == sl3.dim
    assert all(op.shape == (3, 3) for op in ops)
