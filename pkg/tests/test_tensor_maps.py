"""
Partitions, Littlewood-Richardson coefficients and the non-monoidality witness
"""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from src.foldlab.errors import InvalidInputError
from src.foldlab.tensor_maps import (
    Partition,
    dualize_A,
    gl_dim,
    lr_by_characters,
    lr_coefficients,
    lr_report,
    nonmonoidality_witness,
    normalize_pgl,
    weight_map_A,
)


def test_pgl_normalization_and_duality():
    assert normalize_pgl((6, 3, 2, 1), 4) == (5, 2, 1)
    assert dualize_A((6, 3, 2, 1), 4) == (5, 4, 3)
    assert Partition.parse((4, 2, 2), 4).is_self_dual()
    assert Partition.parse((2, 2), 4).is_self_dual()
    assert not Partition.parse((6, 3, 2, 1), 4).is_self_dual()


def test_invalid_partitions():
    with pytest.raises(InvalidInputError):
        Partition.parse((1, 2), 3)
    with pytest.raises(InvalidInputError):
        Partition.parse((1, 1, 1, 1, 1), 4)


def test_gl_dimensions():
    assert gl_dim((1,), 4) == 4
    assert gl_dim((1, 1), 4) == 6
    assert gl_dim((2,), 3) == 6
    assert gl_dim((2, 1), 3) == 8


def test_small_lr_products():
    assert lr_coefficients((1,), (1,)) == {(2,): 1, (1, 1): 1}
    assert lr_coefficients((2, 1), (2, 1), 3)[(3, 2, 1)] == 2
    # two rows: (1,1) x (1,1) loses (1,1,1,1)
    assert (1, 1, 1, 1) not in lr_coefficients((1, 1), (1, 1), 2)


@pytest.mark.parametrize("lam,mu,n", [((2, 1), (2, 1), 3), ((4, 2, 2), (2, 2), 4), ((3, 1), (2,), 3)])
def test_lr_matches_character_oracle(lam, mu, n):
    assert lr_coefficients(lam, mu, n) == lr_by_characters(lam, mu, n)
    assert lr_report(lam, mu, n)["dimension_identity"]["holds"]


def test_weight_map_A():
    assert weight_map_A((2, 2), 2) == (4, 4, 0, 0)
    assert weight_map_A((2, 0), 2) == (4, 2, 2, 0)
    assert weight_map_A((1,), 1) == (2, 0)


def test_nonmonoidality_witness():
    report = nonmonoidality_witness()
    assert report["passed"]
    assert report["coefficient"] >= 1
    assert report["nu_pgl"] == [5, 2, 1]
    assert report["nu_dual"] == [5, 4, 3]
    assert report["inputs_self_dual"]


@pytest.mark.parametrize(
    "parts,n",
    [
        ((), 3),
        ((1,), 2),
        ((2, 1), 3),
        ((6, 3, 2, 1), 4),
        ((4, 2, 2), 4),
        ((3, 3, 1), 5),
        ((5, 1, 1, 1), 4),
        ((7, 4, 4, 2, 1), 6),
    ],
)
def test_dualize_A_is_an_involution(parts, n):
    """Dualizing twice gives back the PGL-normalized partition"""
    once = dualize_A(parts, n)
    assert len(once) < n
    assert dualize_A(once, n) == normalize_pgl(parts, n)
    assert gl_dim(once, n) == gl_dim(normalize_pgl(parts, n), n)
