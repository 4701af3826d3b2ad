"""
Quadratic shift-of-argument Hamiltonians and their spectra.

The loop side is only as big as needed: monomials X_1[r_1]...X_k[r_k] with
negative loop degrees, mapped into U(g) (x) S(g) by the evaluation map

    X[r] -> z^r X (x) 1 + delta_{r,-1} 1 (x) X

applied factor-wise and multiplied in reversed order. Hamiltonians are the
symmetrized quadratic shifts of the Chevalley generators, their linear
companions and the Casimir. Spectra on highest-weight modules are computed
exactly by splitting the module along irreducible factors of characteristic
polynomials.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Poly, Rational, Symbol
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from config.settings import EIGEN_TOLERANCE_EXP, MAX_RESAMPLES, SEED
from src.foldlab.errors import ComputationError, InconclusiveError, InvalidInputError
from src.foldlab.folding import invariant_fold, restrict_weight
from src.foldlab.invariants import chevalley_generators, chi_from_values, regular, sample_point, total_degree
from src.foldlab.linalg import (
    apply,
    column,
    columns_matrix,
    eye,
    in_span,
    inverse,
    nullspace,
    rank,
    restrict,
    same,
    scaled,
    to_rational,
    trace,
    zeros,
)
from src.foldlab.pbw import PBWAlgebra, UEAElement, Word, words_of
from src.foldlab.realizations import MatrixRealization, flatten, get_realization
from src.foldlab.reps import HWModule, construct_module, module_representation, sigma_on_module, weyl_dim

logger = logging.getLogger(__name__)

LAMBDA = Symbol("lambda")


@lru_cache(maxsize=None)
def enveloping_algebra(g: MatrixRealization) -> PBWAlgebra:
    return PBWAlgebra(g)


# ============================================
# Loop monomials and the evaluation map
# ============================================
@dataclass(frozen=True)
class LoopMonomial:
    """Ordered product of X_a[r] with r <= -1, stored as ((a, r), ...)"""

    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for a, r in self.factors:
            if r > -1:
                raise InvalidInputError("loop degrees must be negative", factor=[a, r])

    def __mul__(self, other: "LoopMonomial") -> "LoopMonomial":
        return LoopMonomial(self.factors + other.factors)

    @classmethod
    def parse(cls, g: MatrixRealization, text: str) -> "LoopMonomial":
        """'E1[-1]*F2[-2]' using the realization's basis labels"""
        index = {label: a for a, label in enumerate(g.labels)}
        factors = []
        for piece in str(text).split("*"):
            piece = piece.strip()
            if not piece.endswith("]") or "[" not in piece:
                raise InvalidInputError(f"malformed loop factor '{piece}'")
            label, degree = piece[:-1].split("[", 1)
            if label not in index:
                raise InvalidInputError(f"unknown basis element '{label}'", algebra=g.name)
            factors.append((index[label], int(degree)))
        return cls(tuple(factors))

    def to_str(self, g: MatrixRealization) -> str:
        return "*".join(f"{g.labels[a]}[{r}]" for a, r in self.factors)


LoopElement = Sequence[Tuple[Rational, LoopMonomial]]

# (power of z^{-1}, PBW word of the U(g) leg, sorted monomial of the S(g) leg)
TensorKey = Tuple[int, Word, Tuple[int, ...]]


class TensorElement:
    """Element of U(g) (x) S(g) with coefficients polynomial in z^{-1}"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: PBWAlgebra, terms: Dict[TensorKey, Rational]):
        self.algebra = algebra
        self.terms = {k: v for k, v in terms.items() if v != 0}

    @classmethod
    def one(cls, algebra: PBWAlgebra) -> "TensorElement":
        return cls(algebra, {(0, (), ()): Rational(1)})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Rational(0)) + v
        return TensorElement(self.algebra, out)

    def __mul__(self, other) -> "TensorElement":
        if not isinstance(other, TensorElement):
            c = Rational(other)
            return TensorElement(self.algebra, {k: c * v for k, v in self.terms.items()})
        out: Dict[TensorKey, Rational] = {}
        for (p1, u1, s1), c1 in self.terms.items():
            for (p2, u2, s2), c2 in other.terms.items():
                s = tuple(sorted(s1 + s2))
                for u, d in self.algebra.normal_form(u1 + u2).items():
                    key = (p1 + p2, u, s)
                    out[key] = out.get(key, Rational(0)) + c1 * c2 * d
        return TensorElement(self.algebra, out)

    def powers(self) -> List[int]:
        return sorted({p for p, _, _ in self.terms})

    def coefficient(self, power: int) -> "TensorElement":
        """Coefficient of z^{-power}"""
        return TensorElement(self.algebra, {(0, u, s): v for (p, u, s), v in self.terms.items() if p == power})

    def at(self, z) -> "TensorElement":
        z = Rational(z)
        if z == 0:
            raise InvalidInputError("evaluation point z must be non-zero")
        out: Dict[TensorKey, Rational] = {}
        for (p, u, s), v in self.terms.items():
            key = (0, u, s)
            out[key] = out.get(key, Rational(0)) + v * z ** (-p)
        return TensorElement(self.algebra, out)

    def first_leg(self) -> Optional[UEAElement]:
        """The U(g) leg when the S(g) leg is trivial"""
        if any(s or p for p, _, s in self.terms):
            return None
        return UEAElement(self.algebra, {u: v for (_, u, _), v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_dict(self) -> Dict[str, Rational]:
        labels = self.algebra.realization.labels
        out = {}
        for (p, u, s), v in sorted(self.terms.items()):
            left = "*".join(labels[a] for a in u) or "1"
            right = "*".join(labels[a] for a in s) or "1"
            out[f"z^-{p} {left} (x) {right}"] = v
        return out


def psi_factor(algebra: PBWAlgebra, a: int, r: int) -> TensorElement:
    terms = {(-r, (a,), ()): Rational(1)}
    if r == -1:
        terms[(0, (), (a,))] = Rational(1)
    return TensorElement(algebra, terms)


def psi_eval(
    m: Union[LoopMonomial, LoopElement],
    g: MatrixRealization,
    z=None,
) -> TensorElement:
    """Evaluation map on a loop monomial (or a linear combination of them)

    Without z the result keeps its polynomial dependence on z^{-1}.
    """
    algebra = enveloping_algebra(g)
    if isinstance(m, LoopMonomial):
        result = TensorElement.one(algebra)
        for a, r in reversed(m.factors):
            result = result * psi_factor(algebra, a, r)
    else:
        result = TensorElement(algebra, {})
        for c, mono in m:
            result = result + psi_eval(mono, g) * c
    if z is not None:
        result = result.at(z)
    return result


def coefficient_span(family: TensorElement) -> List[TensorElement]:
    """Non-zero z^{-k} coefficients, highest pole first"""
    return [family.coefficient(p) for p in reversed(family.powers()) if not family.coefficient(p).is_zero()]


def _tensor_vectors(elements: Sequence[TensorElement]) -> List[List[Rational]]:
    keys = sorted({k for x in elements for k in x.terms})
    return [[x.terms.get(k, Rational(0)) for k in keys] for x in elements]


def evaluation_span_check(family: TensorElement, points: Sequence) -> Dict:
    """The values at the given points span the same space as the coefficients"""
    coefficients = coefficient_span(family)
    values = [family.at(z) for z in points]
    vectors = _tensor_vectors(coefficients + values)
    coeff_rows, value_rows = vectors[: len(coefficients)], vectors[len(coefficients):]
    coeff_rank = rank(coeff_rows) if coeff_rows else 0
    value_rank = rank(value_rows) if value_rows else 0
    joint = rank(vectors) if vectors else 0
    return {
        "points": [Rational(z) for z in points],
        "coefficient_rank": coeff_rank,
        "value_rank": value_rank,
        "joint_rank": joint,
        "equal": coeff_rank == value_rank == joint,
    }


def segal_sugawara_quadratic(g: MatrixRealization) -> List[Tuple[Rational, LoopMonomial]]:
    """sum_a X_a[-1] X^a[-1] with the kappa-dual basis"""
    out = []
    for a, row in enumerate(g.dual_basis):
        for b, c in enumerate(row):
            if c:
                out.append((c, LoopMonomial(((a, -1), (b, -1)))))
    return out


def segal_sugawara_sigma_check(g: MatrixRealization) -> bool:
    """sigma (x) sigma fixes the contraction tensor of the quadratic vector"""
    dual = DomainMatrix([[QQ.convert(c) for c in row] for row in g.dual_basis], (g.dim, g.dim), QQ).to_sparse()
    s = g.sigma_operator
    return same(s * dual * s.transpose(), dual)


# ============================================
# Quadratic Hamiltonians
# ============================================
@dataclass(frozen=True, eq=False)
class HamiltonianFamily:
    realization: MatrixRealization = field(repr=False)
    chi: Tuple[Rational, ...]
    names: Tuple[str, ...]
    members: Tuple[UEAElement, ...] = field(repr=False)
    degrees: Tuple[int, ...]
    failures: Tuple[Tuple[str, str], ...]

    @property
    def commuting(self) -> bool:
        return not self.failures

    @property
    def algebra(self) -> PBWAlgebra:
        return enveloping_algebra(self.realization)

    def to_dict(self) -> Dict:
        return {
            "algebra": self.realization.name,
            "chi": list(self.chi),
            "members": [
                {"name": n, "generator_degree": d, "pbw_degree": x.degree, "terms": len(x.terms)}
                for n, d, x in zip(self.names, self.degrees, self.members)
            ],
            "commuting": self.commuting,
            "failures": [list(p) for p in self.failures],
        }


def _symmetrized(algebra: PBWAlgebra, poly, dual) -> UEAElement:
    """Polynomial in the coordinate functions -> symmetrized element of U(g)

    The coordinate function x_a is the element X^a through kappa.
    """
    total = algebra.zero()
    for monom, coeff in poly.terms():
        factors = []
        for a, e in enumerate(monom):
            factors.extend([dual[a]] * e)
        total = total + algebra.symmetrize(factors, to_rational(coeff))
    return total


def quad_hamiltonians(g: MatrixRealization, chi: Sequence, verify: bool = True) -> HamiltonianFamily:
    """Casimir plus sym(d^{d-2}_chi P) and d^{d-1}_chi P for every Chevalley generator P"""
    chi = [Rational(c) for c in chi]
    if len(chi) != g.dim:
        raise InvalidInputError(f"chi must have {g.dim} coordinates for {g.name}", received=len(chi))
    if not regular(g, chi):
        raise InvalidInputError("chi is not regular", chi=chi)
    algebra = enveloping_algebra(g)
    dual = g.dual_basis

    names, members, degrees = ["casimir"], [algebra.casimir()], [2]
    for p in chevalley_generators(g):
        if p.degree < 2:
            continue
        quadratic = p.directional(chi, p.degree - 2)
        linear = p.directional(chi, p.degree - 1)
        for label, poly in ((f"sym d^{p.degree - 2} {p.name}", quadratic), (f"d^{p.degree - 1} {p.name}", linear)):
            if not poly:
                continue
            if total_degree(poly) not in (1, 2):
                raise ComputationError("shifted generator has the wrong degree", member=label)
            names.append(label)
            members.append(_symmetrized(algebra, poly, dual))
            degrees.append(p.degree)

    failures = []
    if verify:
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if not members[i].bracket(members[j]).is_zero():
                    failures.append((names[i], names[j]))
        if failures:
            logger.error(f"Hamiltonians on {g.name} fail to commute: {failures}")
    logger.debug(f"Quadratic family on {g.name}: {len(members)} members")
    return HamiltonianFamily(
        realization=g,
        chi=tuple(chi),
        names=tuple(names),
        members=tuple(members),
        degrees=tuple(degrees),
        failures=tuple(failures),
    )


def family_sigma_signs(family: HamiltonianFamily) -> List[Dict]:
    """sigma on each member: +-1 when it maps the member to +- itself

    For sl_n the expected sign on members built from the degree k generator
    is (-1)^k (the Casimir is fixed).
    """
    g = family.realization
    if g.sigma is None:
        raise InvalidInputError(f"{g.name} carries no diagram automorphism")
    algebra = family.algebra
    s = g.sigma_operator
    words = words_of(family.members)
    span = [x.coefficient_vector(words) for x in family.members]
    out = []
    for name, degree, x in zip(family.names, family.degrees, family.members):
        image = algebra.apply_linear(x, s)
        ratio = image.proportional_to(x)
        sign = int(ratio) if ratio in (1, -1) else None
        inside = set(image.terms) <= set(words) and in_span(span, image.coefficient_vector(words)) is not None
        expected = 1 if name == "casimir" else (-1) ** degree
        out.append({"name": name, "sign": sign, "expected": expected, "in_span": inside, "consistent": sign == expected})
    return out


def sample_regular_chi(g: MatrixRealization, rng: random.Random, sigma_fixed: bool = False) -> Tuple[List[Rational], List[int]]:
    """Seeded regular chi in the Cartan, optionally sigma-fixed"""
    for attempt in range(MAX_RESAMPLES):
        values = sample_point(rng, g.rank)
        if sigma_fixed:
            if g.sigma is None:
                raise InvalidInputError(f"{g.name} carries no diagram automorphism")
            for orbit in g.sigma.orbits(g.cartan):
                first = values[orbit.nodes[0]]
                for i in orbit.nodes:
                    values[i] = first
        chi = chi_from_values(g, values)
        if regular(g, chi):
            return chi, values
        logger.warning(f"chi sample {attempt} on {g.name} not regular, resampling")
    raise InconclusiveError("no regular chi found", algebra=g.name, attempts=MAX_RESAMPLES)


# ============================================
# Joint spectra
# ============================================
@dataclass(frozen=True, eq=False)
class EigenBlock:
    """Joint eigenspace of the rational members, or a Galois orbit of them"""

    basis: DomainMatrix = field(repr=False)
    values: Tuple = ()
    split: bool = False
    fields: Tuple = ()

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def lines(self) -> int:
        return 1 if self.dim == 1 else (self.dim if self.split else 0)

    def rational_basis(self) -> List[List[Rational]]:
        return [column(self.basis, j) for j in range(self.dim)]


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    algebra: str
    highest_weight: Tuple[int, ...]
    module_dim: int
    names: Tuple[str, ...]
    operators: Tuple[DomainMatrix, ...] = field(repr=False)
    blocks: Tuple[EigenBlock, ...] = field(repr=False)
    status: str
    residuals_ok: bool
    seed: int

    @property
    def simple(self) -> bool:
        return self.status == "simple"

    @property
    def eigenline_count(self) -> int:
        return sum(b.lines for b in self.blocks)

    def eigenlines(self) -> List[List[Rational]]:
        """Rational eigenline vectors (one-dimensional blocks)"""
        out = []
        for block in self.blocks:
            if block.dim == 1:
                out.append([block.basis.to_Matrix()[i, 0] for i in range(self.module_dim)])
        return out

    @staticmethod
    def _block_dict(block: EigenBlock) -> Dict:
        out = {"dim": block.dim, "values": list(block.values), "split": block.split or block.dim == 1}
        if block.dim > 1:
            out["rational_basis"] = block.rational_basis()
            out["fields"] = list(block.fields)
        return out

    def to_dict(self) -> Dict:
        return {
            "algebra": self.algebra,
            "highest_weight": list(self.highest_weight),
            "module_dim": self.module_dim,
            "family": list(self.names),
            "blocks": [self._block_dict(b) for b in self.blocks],
            "eigenline_count": self.eigenline_count,
            "dimension_sum": sum(b.dim for b in self.blocks),
            "status": self.status,
            "simple": self.simple,
            "residuals_ok": self.residuals_ok,
            "seed": self.seed,
        }


def _poly(coefficients: Sequence[Rational]) -> Poly:
    return Poly(list(coefficients), LAMBDA, domain=QQ)


def _charpoly(matrix: DomainMatrix) -> Poly:
    if matrix.shape[0] == 0:
        return Poly(1, LAMBDA, domain=QQ)
    return _poly([Rational(c) for c in matrix.to_dense().charpoly()])


def _poly_at(f: Poly, matrix: DomainMatrix) -> DomainMatrix:
    n = matrix.shape[0]
    out = zeros(n, n)
    identity = eye(n)
    for c in f.all_coeffs():
        out = out * matrix.to_sparse() + scaled(identity, c)
    return out


def _describe_factor(f: Poly, tolerance_exp: int):
    if f.degree() == 1:
        a, b = f.all_coeffs()
        return Rational(-b, a)
    eps = Rational(1, 10 ** tolerance_exp)
    roots = [[lo, hi] for (lo, hi), _ in f.intervals(eps=eps)]
    return {"factor": str(f.as_expr()), "roots": roots, "complex_roots": f.degree() - len(roots)}


def _squarefree_of_degree(f: Poly, n: int) -> bool:
    return f.degree() == n and f.gcd(f.diff(LAMBDA)).degree() == 0


def _factor_field(f: Poly, op: DomainMatrix, basis: DomainMatrix, name: str) -> Dict:
    """Eigenspace data of op on a block over QQ[t]/(f), f irreducible of degree d > 1

    Each root t of f has an eigenspace of dimension dim/d. When that is one,
    the eigenvector is given as coefficient vectors u_0..u_{d-1} with
    op w = t w for w = sum_p t^p u_p. With f = sum_j a_j x^j and any nonzero v
    in the block, u_p = sum_i a_{i+p+1} op^i v.
    """
    d, k = f.degree(), basis.shape[1]
    out = {"operator": name, "factor": str(f.as_expr()), "degree": d, "eigenspace_dim": k // d}
    if k != d:
        return out
    a = list(reversed(f.all_coeffs()))
    powers = [column(basis, 0)]
    for _ in range(d - 1):
        powers.append(apply(op, powers[-1]))
    out["eigenvector"] = [
        [sum((a[i + p + 1] * powers[i][r] for i in range(d - p)), Rational(0)) for r in range(op.shape[0])]
        for p in range(d)
    ]
    return out


def joint_spectrum(
    operators: Sequence[DomainMatrix],
    names: Sequence[str],
    seed: Optional[int] = None,
    tolerance_exp: Optional[int] = None,
) -> Tuple[Tuple[EigenBlock, ...], str, bool]:
    """Split the space by irreducible factors of each operator in turn

    Returns (blocks, status, residuals_ok). Status is "simple" when every
    block is a line or splits into distinct lines over the algebraic
    closure, "degenerate" when some block carries a repeated joint
    eigenvalue, "inconclusive" otherwise.
    """
    tolerance_exp = EIGEN_TOLERANCE_EXP if tolerance_exp is None else tolerance_exp
    n = operators[0].shape[0]
    for i in range(len(operators)):
        for j in range(i + 1, len(operators)):
            if not same(operators[i] * operators[j], operators[j] * operators[i]):
                raise InvalidInputError("family does not commute on the module", pair=[names[i], names[j]])

    blocks: List[Tuple[DomainMatrix, List, List[Poly]]] = [(eye(n), [], [])]
    diagonalizable = True
    for op in operators:
        refined = []
        for basis, values, factors in blocks:
            k = basis.shape[1]
            local = restrict(op, basis)
            _, pieces = _charpoly(local).factor_list()
            found = 0
            for f, _ in pieces:
                kernel = nullspace(_poly_at(f, local))
                if not kernel:
                    continue
                sub = basis * columns_matrix(kernel, k)
                refined.append((sub, values + [_describe_factor(f, tolerance_exp)], factors + [f]))
                found += len(kernel)
            if found != k:
                diagonalizable = False
                logger.warning(f"operator not semisimple on a block of dim {k}")
                refined.append((basis, values + [None], factors + [None]))
        blocks = refined

    residuals_ok = True
    for basis, _, factors in blocks:
        for op, f in zip(operators, factors):
            if f is not None and not same(_poly_at(f, op) * basis, zeros(n, basis.shape[1])):
                residuals_ok = False

    rng = random.Random(SEED if seed is None else seed)
    out = []
    status = "simple" if diagonalizable else "inconclusive"
    for basis, values, factors in blocks:
        k = basis.shape[1]
        split = k == 1
        if not split and all(f is not None and f.degree() == 1 for f in factors):
            status = "degenerate" if status == "simple" else status
        elif not split:
            locals_ = [restrict(op, basis) for op in operators]
            split = any(_squarefree_of_degree(_charpoly(m), k) for m in locals_)
            for _ in range(MAX_RESAMPLES if not split else 0):
                combo = zeros(k, k)
                for m in locals_:
                    combo = combo + scaled(m, rng.randint(-9, 9))
                if _squarefree_of_degree(_charpoly(combo), k):
                    split = True
                    break
            if not split and status == "simple":
                status = "inconclusive"
        fields = ()
        if k > 1:
            fields = tuple(
                _factor_field(f, op, basis, name)
                for op, f, name in zip(operators, factors, names)
                if f is not None and f.degree() > 1
            )
        out.append(EigenBlock(basis=basis, values=tuple(values), split=split, fields=fields))
    if status != "simple":
        logger.warning(f"Spectrum status {status} on a space of dim {n}")
    return tuple(out), status, residuals_ok


def spectrum(family: HamiltonianFamily, module: HWModule, seed: Optional[int] = None) -> SpectrumReport:
    """Joint spectrum of the family on a highest-weight module"""
    if not family.commuting:
        raise InvalidInputError("family does not commute", failures=[list(p) for p in family.failures])
    g = family.realization
    basis_ops = module_representation(module, g)
    algebra = family.algebra
    operators = tuple(algebra.represent(x, basis_ops) for x in family.members)
    blocks, status, residuals_ok = joint_spectrum(operators, family.names, seed)
    seed = SEED if seed is None else seed
    report = SpectrumReport(
        algebra=g.name,
        highest_weight=module.highest.int_labels(),
        module_dim=module.dim,
        names=family.names,
        operators=operators,
        blocks=blocks,
        status=status,
        residuals_ok=residuals_ok,
        seed=seed,
    )
    if sum(b.dim for b in blocks) != module.dim:
        raise ComputationError("joint eigenspaces do not fill the module", dims=[b.dim for b in blocks])
    return report


# ============================================
# sigma on eigenlines
# ============================================
@dataclass(frozen=True)
class EigenlineReport:
    conjugation_ok: bool
    fixed_lines: int
    plus_lines: int
    minus_lines: int
    other_fixed: int
    moved_lines: int
    order: int
    trace: Rational
    folded_dim: Optional[int]

    @property
    def cycles(self) -> int:
        return self.moved_lines // self.order if self.order > 1 else 0

    @property
    def passed(self) -> bool:
        count_ok = self.folded_dim is None or self.fixed_lines == self.folded_dim
        return self.conjugation_ok and count_ok and self.minus_lines == 0

    def to_dict(self) -> Dict:
        return {
            "conjugation_ok": self.conjugation_ok,
            "fixed_lines": self.fixed_lines,
            "plus_lines": self.plus_lines,
            "minus_lines": self.minus_lines,
            "other_fixed": self.other_fixed,
            "moved_lines": self.moved_lines,
            "cycles": self.cycles,
            "order": self.order,
            "trace": self.trace,
            "folded_dim": self.folded_dim,
            "passed": self.passed,
        }


def _order(s: DomainMatrix, limit: int = 6) -> int:
    n = s.shape[0]
    power = s
    for k in range(1, limit + 1):
        if same(power, eye(n)):
            return k
        power = power * s
    raise InvalidInputError("sigma action does not have finite small order")


def sigma_eigenline_analysis(report: SpectrumReport, s: DomainMatrix, folded_dim: Optional[int] = None) -> EigenlineReport:
    """Permutation of joint eigenlines by S and the sign of S on the fixed ones

    The span Z of fixed eigenlines is the common kernel of S H S^{-1} - H
    over the family; it is computed over QQ even when eigenvalues are not
    rational.
    """
    if not report.simple:
        raise InconclusiveError("spectrum is not certified simple", status=report.status)
    n = report.module_dim
    s = s.to_sparse()
    s_inv = inverse(s)
    conjugates = [s * h * s_inv for h in report.operators]

    span = [flatten(h) for h in report.operators]
    conjugation_ok = all(in_span(span, flatten(c)) is not None for c in conjugates)

    stacked: List[List[Rational]] = []
    for c, h in zip(conjugates, report.operators):
        stacked.extend((c - h.to_sparse()).to_Matrix().tolist())
    fixed = nullspace(stacked, n) if stacked else [[Rational(int(i == j)) for j in range(n)] for i in range(n)]

    plus = minus = 0
    if fixed:
        basis = columns_matrix(fixed, n)
        local = restrict(s, basis)
        k = len(fixed)
        plus = len(nullspace(local - eye(k)))
        minus = len(nullspace(local + eye(k)))
    result = EigenlineReport(
        conjugation_ok=conjugation_ok,
        fixed_lines=len(fixed),
        plus_lines=plus,
        minus_lines=minus,
        other_fixed=len(fixed) - plus - minus,
        moved_lines=n - len(fixed),
        order=_order(s),
        trace=trace(s),
        folded_dim=folded_dim,
    )
    logger.debug(f"Eigenlines: {result.fixed_lines} fixed ({minus} negative) of {n}")
    return result


def sigma_eigenline_check(
    algebra: str,
    labels: Sequence[int],
    chi_values: Optional[Sequence] = None,
    seed: Optional[int] = None,
    cap: Optional[int] = None,
) -> Dict:
    """Spectrum on V(lambda) for sigma-fixed regular chi and the fixed-line count"""
    g = get_realization(algebra)
    if g.sigma is None:
        raise InvalidInputError(f"{g.name} carries no diagram automorphism")
    datum = g.datum
    weight = datum.weight_from_labels([int(x) for x in labels])
    seed = SEED if seed is None else seed
    if chi_values is None:
        chi, chi_values = sample_regular_chi(g, random.Random(seed), sigma_fixed=True)
    else:
        chi = chi_from_values(g, chi_values)
    family = quad_hamiltonians(g, chi)
    module = construct_module(datum, weight, cap)
    s = sigma_on_module(module, g.sigma)
    folded = invariant_fold(datum, g.sigma)
    folded_dim = weyl_dim(folded, restrict_weight(weight, folded))

    report = spectrum(family, module, seed)
    payload = {
        "chi_values": [Rational(v) for v in chi_values],
        "spectrum": report.to_dict(),
        "sigma_signs": family_sigma_signs(family),
    }
    if not report.simple:
        payload.update({"status": "inconclusive", "passed": False})
        return payload
    analysis = sigma_eigenline_analysis(report, s, folded_dim)
    payload.update({"status": "simple", "eigenlines": analysis.to_dict(), "passed": analysis.passed})
    return payload


__all__ = [
    "LoopMonomial",
    "TensorElement",
    "enveloping_algebra",
    "psi_factor",
    "psi_eval",
    "coefficient_span",
    "evaluation_span_check",
    "segal_sugawara_quadratic",
    "segal_sugawara_sigma_check",
    "HamiltonianFamily",
    "quad_hamiltonians",
    "family_sigma_signs",
    "sample_regular_chi",
    "EigenBlock",
    "SpectrumReport",
    "joint_spectrum",
    "spectrum",
    "EigenlineReport",
    "sigma_eigenline_analysis",
    "sigma_eigenline_check",
]
