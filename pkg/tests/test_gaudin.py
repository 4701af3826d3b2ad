"""
Loop monomials, the evaluation map, quadratic Hamiltonians and joint spectra
"""

import os
import random
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest
from sympy import Matrix, Rational, sqrt

from src.foldlab.errors import InvalidInputError
from src.foldlab.gaudin import (
    LoopMonomial,
    SpectrumReport,
    evaluation_span_check,
    family_sigma_signs,
    joint_spectrum,
    psi_eval,
    quad_hamiltonians,
    sample_regular_chi,
    segal_sugawara_quadratic,
    segal_sugawara_sigma_check,
    sigma_eigenline_check,
    spectrum,
)
from src.foldlab.invariants import chi_from_values
from src.foldlab.linalg import dm, sparse
from src.foldlab.reps import construct_module


# ============================================
# Loop side
# ============================================
def test_parse_loop_monomial(sl2):
    m = LoopMonomial.parse(sl2, "E12[-1]*E21[-2]")
    assert m.factors == ((1, -1), (2, -2))
    assert m.to_str(sl2) == "E12[-1]*E21[-2]"
    assert (m * m).factors == m.factors + m.factors


@pytest.mark.parametrize("text", ["E12[0]", "E12[-1]*X[-1]", "E12-1", "h1[2]"])
def test_bad_loop_monomials(sl2, text):
    with pytest.raises(InvalidInputError):
        LoopMonomial.parse(sl2, text)


def test_evaluation_of_a_single_factor(sl2):
    image = psi_eval(LoopMonomial.parse(sl2, "E12[-1]"), sl2)
    assert image.powers() == [0, 1]
    at_two = psi_eval(LoopMonomial.parse(sl2, "E12[-1]"), sl2, z=2)
    assert at_two.terms == {(0, (1,), ()): Rational(1, 2), (0, (), (1,)): Rational(1)}
    with pytest.raises(InvalidInputError):
        image.at(0)


def test_deeper_factors_have_no_classical_leg(sl2):
    image = psi_eval(LoopMonomial.parse(sl2, "E21[-3]"), sl2)
    assert image.terms == {(3, (2,), ()): Rational(1)}


def test_quadratic_vector_spans_by_evaluation(sl2, sl3):
    for g in (sl2, sl3):
        family = psi_eval(segal_sugawara_quadratic(g), g)
        report = evaluation_span_check(family, [1, 2, 3])
        assert report["equal"]
        assert report["coefficient_rank"] == len(family.powers())
    assert segal_sugawara_sigma_check(sl3)


# ============================================
# Hamiltonians
# ============================================
@pytest.mark.parametrize("name,values", [("sl2", [1, -1]), ("sl3", [3, 1, -4]), ("sl3", [1, 3])])
def test_quadratic_family_commutes(name, values, request):
    g = request.getfixturevalue(name)
    family = quad_hamiltonians(g, chi_from_values(g, values))
    assert family.commuting
    assert family.names[0] == "casimir"
    assert family.to_dict()["failures"] == []


def test_family_needs_regular_chi(sl3):
    with pytest.raises(InvalidInputError):
        quad_hamiltonians(sl3, chi_from_values(sl3, [1, 1, -2]))
    with pytest.raises(InvalidInputError):
        quad_hamiltonians(sl3, [1, 2])


def test_sigma_signs(sl3):
    chi, values = sample_regular_chi(sl3, random.Random(3), sigma_fixed=True)
    assert values[0] == values[1]
    rows = family_sigma_signs(quad_hamiltonians(sl3, chi))
    assert all(row["consistent"] and row["in_span"] for row in rows)


# ============================================
# Spectra
# ============================================
def test_joint_spectrum_of_diagonal_operators():
    a = sparse({(0, 0): 1, (1, 1): 1, (2, 2): 2}, (3, 3))
    b = sparse({(0, 0): 1, (1, 1): 2, (2, 2): 2}, (3, 3))
    blocks, status, residuals_ok = joint_spectrum([a, b], ["a", "b"])
    assert status == "simple" and residuals_ok
    assert sorted(block.dim for block in blocks) == [1, 1, 1]
    _, status, _ = joint_spectrum([a], ["a"])
    assert status == "degenerate"


def test_irrational_eigenvalues_split():
    m = dm([[0, 2], [1, 0]])
    blocks, status, _ = joint_spectrum([m], ["m"])
    assert status == "simple"
    assert len(blocks) == 1
    assert blocks[0].dim == 2 and blocks[0].lines == 2
    assert blocks[0].values[0]["complex_roots"] == 0


def test_irrational_block_reports_eigenvector_over_factor_field():
    """x^2 - 2 on a plane: one eigenline per root, written as u_0 + t u_1"""
    m = dm([[0, 2], [1, 0]])
    blocks, _, _ = joint_spectrum([m], ["m"])
    (data,) = blocks[0].fields
    assert data["degree"] == 2 and data["eigenspace_dim"] == 1
    u0, u1 = (Matrix(u) for u in data["eigenvector"])
    for t in (sqrt(2), -sqrt(2)):
        w = u0 + t * u1
        assert any(x != 0 for x in w)
        assert (Matrix([[0, 2], [1, 0]]) * w - t * w).expand() == Matrix([0, 0])


def test_repeated_irrational_factor_reports_block_dimension():
    m = dm([[0, 2, 0, 0], [1, 0, 0, 0], [0, 0, 0, 2], [0, 0, 1, 0]])
    blocks, status, _ = joint_spectrum([m], ["m"])
    assert status == "inconclusive"
    (block,) = blocks
    (data,) = block.fields
    assert data["eigenspace_dim"] == 2
    assert "eigenvector" not in data
    report = SpectrumReport(
        algebra="test", highest_weight=(), module_dim=4, names=("m",), operators=(m,),
        blocks=blocks, status=status, residuals_ok=True, seed=0,
    ).to_dict()
    assert len(report["blocks"][0]["rational_basis"]) == 4
    assert report["blocks"][0]["fields"][0]["factor"] == "lambda**2 - 2"


def test_noncommuting_operators_rejected():
    a = dm([[0, 1], [0, 0]])
    b = dm([[0, 0], [1, 0]])
    with pytest.raises(InvalidInputError):
        joint_spectrum([a, b], ["e", "f"])


def test_spectrum_on_sl2_adjoint(sl2):
    family = quad_hamiltonians(sl2, chi_from_values(sl2, [1, -1]))
    module = construct_module(sl2.datum, sl2.datum.weight_from_labels([2]))
    report = spectrum(family, module).to_dict()
    assert report["dimension_sum"] == report["module_dim"] == 3
    assert report["simple"]
    assert report["eigenline_count"] == 3


@pytest.mark.slow
@pytest.mark.parametrize("algebra,labels,lines", [("sl3", [1, 1], 2), ("sl4", [0, 1, 0], 4)])
def test_sigma_fixed_eigenlines(algebra, labels, lines):
    report = sigma_eigenline_check(algebra, labels)
    assert report["status"] == "simple"
    assert report["passed"]
    assert report["eigenlines"]["fixed_lines"] == lines
    assert report["eigenlines"]["minus_lines"] == 0
