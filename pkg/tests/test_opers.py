"""
Truncated series, gauge reduction of opers, sigma-fixed opers and residues
"""

import os
import random
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from config.settings import GAUGE_SAMPLES, TRUNCATION_ORDER
from src.foldlab.errors import InvalidInputError
from src.foldlab.linalg import dm, same
from src.foldlab.opers import (
    MatrixSeries,
    TruncatedSeries,
    extend_oper,
    fixed_oper_match,
    gauge_reduce,
    gauge_transform,
    lambda_residue,
    parse_connection,
    random_connection,
    random_gauge,
    residue,
    sigma_on_oper,
    sl2_closed_form,
)
from src.foldlab.realizations import folded_realization

ORDER = 5


# ============================================
# Series arithmetic
# ============================================
def test_series_arithmetic():
    one_plus_t = TruncatedSeries((1, 1), 4)
    one_minus_t = TruncatedSeries((1, -1), 4)
    assert (one_plus_t * one_minus_t).coefficients == (1, 0, -1, 0)
    assert one_minus_t.inverse().coefficients == (1, 1, 1, 1)
    assert (one_plus_t**3).coefficients == (1, 3, 3, 1)
    assert (2 - one_plus_t).coefficients == (1, -1, 0, 0)


def test_derivative_costs_one_order():
    s = TruncatedSeries((1, 2, 3), 3)
    d = s.derivative()
    assert d.order == 2
    assert d.coefficients == (2, 6)
    assert (s + d).order == 2


def test_zero_head_is_not_invertible():
    with pytest.raises(InvalidInputError):
        TruncatedSeries((0, 1), 3).inverse()


def test_exp_of_a_nilpotent_constant():
    n = dm([[0, 1, 0], [0, 0, 2], [0, 0, 0]])
    result = MatrixSeries.constant(n, 2).exp()
    # I + N + N^2/2
    assert same(result.coefficient(0), dm([[1, 1, 1], [0, 1, 2], [0, 0, 1]]))
    assert result.coefficient(1).is_zero_matrix


# ============================================
# Canonical form
# ============================================
@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_reduction_is_idempotent_and_gauge_invariant(name, request, rng):
    g = request.getfixturevalue(name)
    for _ in range(3):
        c = random_connection(g, rng, ORDER)
        reduced = gauge_reduce(c)
        assert gauge_reduce(reduced.to_connection()).agrees(reduced)
        moved = gauge_transform(c, random_gauge(g, rng, ORDER))
        assert gauge_reduce(moved).agrees(reduced)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["sl2", "sl3", "sp4"])
def test_normal_form_on_a_full_random_sample(name, request):
    """Idempotence and gauge invariance over the configured sample at full order"""
    g = request.getfixturevalue(name)
    rng = random.Random(name)
    for _ in range(GAUGE_SAMPLES):
        c = random_connection(g, rng, TRUNCATION_ORDER)
        reduced = gauge_reduce(c)
        assert gauge_reduce(reduced.to_connection()).agrees(reduced)
        moved = gauge_transform(c, random_gauge(g, rng, TRUNCATION_ORDER))
        assert gauge_reduce(moved).agrees(reduced)


def test_sl2_closed_form(sl2):
    c = parse_connection(sl2, {"v": {"h1": [1, 2], "E12": [3]}}, order=4)
    closed = sl2_closed_form(c)
    # b + a^2 + a' with a = 1 + 2t, b = 3
    assert closed.coefficients == (6, 4, 4)
    assert gauge_reduce(c).coefficients[0].agrees(closed)


def test_sl2_closed_form_needs_unit_psi(sl2):
    c = parse_connection(sl2, {"psi": [[2]], "v": {}}, order=3)
    with pytest.raises(InvalidInputError):
        sl2_closed_form(c)


def test_reduction_tracks_precision(sl2, rng):
    c = random_connection(sl2, rng, ORDER)
    reduced = gauge_reduce(c)
    assert reduced.degrees == (1,)
    assert 0 < reduced.order < ORDER


def test_invalid_connections(sl2, sl3):
    with pytest.raises(InvalidInputError):
        parse_connection(sl2, {"psi": [[0, 1]]})
    with pytest.raises(InvalidInputError):
        parse_connection(sl3, {"v": {"E31": [1]}})
    with pytest.raises(InvalidInputError):
        parse_connection(sl3, {"psi": [[1]]})
    pole = parse_connection(sl2, {"pole_order": 1})
    with pytest.raises(InvalidInputError):
        gauge_reduce(pole)


# ============================================
# sigma and the folded algebra
# ============================================
@pytest.mark.slow
def test_reduction_commutes_with_sigma(sl4):
    rng = random.Random(5)
    c = random_connection(sl4, rng, 4)
    assert gauge_reduce(sigma_on_oper(c)).agrees(sigma_on_oper(gauge_reduce(c)))


@pytest.mark.slow
def test_folded_oper_round_trip(sl4):
    rng = random.Random(6)
    h = folded_realization(sl4)
    folded_oper = gauge_reduce(random_connection(h, rng, 4))
    lifted = extend_oper(folded_oper, sl4)
    assert sigma_on_oper(lifted).agrees(lifted)
    match = fixed_oper_match(lifted)
    assert match.ok
    assert match.oper.agrees(folded_oper)


@pytest.mark.slow
def test_moved_oper_is_not_fixed(sl4):
    c = gauge_reduce(parse_connection(sl4, {"v": {"E13": [1, 1]}}, order=3))
    match = fixed_oper_match(c)
    assert not match.ok
    assert match.degree == 2


def test_extend_needs_the_folded_algebra(sl3, sl4):
    oper = gauge_reduce(parse_connection(sl3, {}, order=3))
    with pytest.raises(InvalidInputError):
        extend_oper(oper, sl4)


# ============================================
# Residues
# ============================================
def test_residue_needs_a_pole(sl2):
    with pytest.raises(InvalidInputError):
        residue(parse_connection(sl2, {}))
    report = residue(parse_connection(sl2, {"pole_order": 1, "v": {"h1": [1]}}))
    assert [row["degree"] for row in report["values"]] == [2]
    assert report["values"][0]["value"] != 0


@pytest.mark.parametrize("name,labels", [("sl2", [1]), ("sl2", [3]), ("sl3", [1, 0]), ("sp4", [0, 1])])
def test_lambda_residue(name, labels, request):
    g = request.getfixturevalue(name)
    report = lambda_residue(g, labels, order=2)
    assert report["passed"]
    assert report["connection"]["pole_order"] == 1
