"""
Invariant polynomials on a matrix realization.

Chevalley generators are read off the characteristic polynomial of the
generic element sum x_a X_a, as sparse PolyElements over QQ in the
coordinate functions x_a. The principal sl2 triple and V_can = g^{p_1} give
the Kostant section; restriction to it, to its sigma-fixed part and to the
folded realization's own section are compared exactly.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring, xring

from config.settings import MAX_RESAMPLES, SEED, sample_bounds
from src.foldlab.errors import ComputationError, InconclusiveError, InvalidInputError
from src.foldlab.folding import invariant_fold, restrict_weight
from src.foldlab.linalg import apply, columns_matrix, nullspace, rank, solve, to_rational
from src.foldlab.realizations import MatrixRealization, flatten, folded_realization, realization_for_cartan
from src.foldlab.reps import construct_module, module_representation

logger = logging.getLogger(__name__)

Coords = List[Rational]


# ============================================
# Polynomial plumbing
# ============================================
@lru_cache(maxsize=None)
def coordinate_ring(dim: int):
    """QQ[x1..x_dim] and the tuple of its generators"""
    return xring([f"x{a + 1}" for a in range(dim)], QQ)


def ground_value(p: PolyElement) -> Rational:
    """Value of a constant polynomial"""
    if p and not p.is_ground:
        raise ComputationError("polynomial is not constant", poly=str(p))
    return to_rational(p.get(p.ring.zero_monom, QQ.zero))


def directional(p: PolyElement, direction: Sequence) -> PolyElement:
    """d/dt p(x + t direction) at t = 0"""
    gens = p.ring.gens
    out = p.ring.zero
    for a, c in enumerate(direction):
        if c:
            out += p.diff(gens[a]) * QQ.convert(Rational(c))
    return out


def evaluate(p: PolyElement, point: Sequence) -> Rational:
    if not p:
        return Rational(0)
    return to_rational(p(*[QQ.convert(Rational(v)) for v in point]))


def substitute_affine(p: PolyElement, base: Sequence, directions: Sequence[Sequence], target) -> PolyElement:
    """p(base + sum_k c_k directions[k]) as a polynomial in the generators of target"""
    t_gens = target.gens
    forms = []
    for a in range(p.ring.ngens):
        form = target(QQ.convert(Rational(base[a])))
        for k, d in enumerate(directions):
            if d[a]:
                form += t_gens[k] * QQ.convert(Rational(d[a]))
        forms.append(form)
    out = target.zero
    for monom, coeff in p.terms():
        term = target(coeff)
        for a, e in enumerate(monom):
            if e:
                term *= forms[a] ** e
        out += term
    return out


def total_degree(p: PolyElement) -> Optional[int]:
    if not p:
        return None
    return max(sum(m) for m in p.monoms())


def jacobian_determinant(polys: Sequence[PolyElement]) -> PolyElement:
    gens = polys[0].ring.gens
    domain = polys[0].ring.to_domain()
    rows = [[p.diff(g) for g in gens] for p in polys]
    return DomainMatrix(rows, (len(polys), len(gens)), domain).det()


# ============================================
# Chevalley generators
# ============================================
@dataclass(frozen=True, eq=False)
class InvariantPoly:
    """Homogeneous polynomial in the coordinate functions of a realization"""

    name: str
    degree: int
    poly: PolyElement = field(repr=False)

    def evaluate(self, coords: Sequence) -> Rational:
        return evaluate(self.poly, coords)

    def directional(self, direction: Sequence, times: int = 1) -> PolyElement:
        out = self.poly
        for _ in range(times):
            out = directional(out, direction)
        return out

    def to_dict(self) -> Dict:
        return {"name": self.name, "degree": self.degree, "terms": len(self.poly.terms())}


def generic_charpoly(g: MatrixRealization) -> List[PolyElement]:
    """det(t - sum x_a X_a) = t^n + c_1 t^{n-1} + ... ; returns [c_1..c_n]"""
    R, xs = coordinate_ring(g.dim)
    domain = R.to_domain()
    entries: Dict[int, Dict[int, PolyElement]] = {}
    for x, matrix in zip(xs, g.basis):
        for i, row in matrix.to_sparse().to_dod().items():
            for j, v in row.items():
                entries.setdefault(i, {})
                entries[i][j] = entries[i].get(j, R.zero) + x * v
    entries = {i: {j: v for j, v in row.items() if v} for i, row in entries.items()}
    generic = DomainMatrix(entries, (g.n, g.n), domain)
    coefficients = generic.to_dense().charpoly()
    return [R(c) for c in coefficients[1:]]


def invariance_check(g: MatrixRealization, p: PolyElement) -> bool:
    """Every ad(X_b) vector field annihilates p"""
    R, xs = coordinate_ring(g.dim)
    partials = [p.diff(x) for x in xs]
    for b in range(g.dim):
        total = R.zero
        for a in range(g.dim):
            if not partials[a]:
                continue
            form = R.zero
            for c in range(g.dim):
                coeff = g.structure[b][c][a]
                if coeff:
                    form += xs[c] * QQ.convert(coeff)
            total += partials[a] * form
        if total:
            return False
    return True


@lru_cache(maxsize=None)
def _chevalley_cached(name: str, realization: MatrixRealization) -> Tuple[InvariantPoly, ...]:
    coefficients = generic_charpoly(realization)
    out = []
    for k, c in enumerate(coefficients, start=1):
        if c:
            out.append(InvariantPoly(name=f"P{k}", degree=k, poly=c))
    logger.debug(f"Chevalley generators of {name}: degrees {[p.degree for p in out]}")
    return tuple(out)


def chevalley_generators(g: MatrixRealization, verify: bool = False) -> List[InvariantPoly]:
    """Nonzero characteristic polynomial coefficients of the generic element

    Raises ComputationError when the degrees do not add up to dim b or when
    verification of ad-invariance fails.
    """
    generators = list(_chevalley_cached(g.name, g))
    if len(generators) != g.rank:
        raise ComputationError(
            f"{g.name}: expected {g.rank} generators", degrees=[p.degree for p in generators]
        )
    total = sum(p.degree for p in generators)
    if total != len(g.borel_indices):
        raise ComputationError(f"{g.name}: degree sum {total} differs from dim b {len(g.borel_indices)}")
    if verify:
        for p in generators:
            if not invariance_check(g, p.poly):
                raise ComputationError(f"{g.name}: {p.name} is not ad-invariant")
    return generators


def chevalley_report(g: MatrixRealization) -> Dict:
    generators = chevalley_generators(g, verify=True)
    degrees = [p.degree for p in generators]
    section = principal_triple(g)
    restricted = [restrict_to_section(p, section) for p in generators]
    det = jacobian_determinant(restricted)
    invertible = bool(det) and det.is_ground
    return {
        "algebra": g.name,
        "degrees": degrees,
        "degree_sum": sum(degrees),
        "dim_b": len(g.borel_indices),
        "exponents": list(section.exponents),
        "section_jacobian": str(ground_value(det)) if invertible else str(det.as_expr()),
        "generators": [p.to_dict() for p in generators],
        "passed": sum(degrees) == len(g.borel_indices) and invertible,
    }


# ============================================
# Principal triple and Kostant section
# ============================================
@dataclass(frozen=True, eq=False)
class KostantSection:
    """{p_-1, 2 rho^vee, p_1} with V_can = g^{p_1} graded by ad rho^vee"""

    realization: MatrixRealization = field(repr=False)
    p_minus1: Tuple[Rational, ...]
    two_rho_vee: Tuple[Rational, ...]
    p_1: Tuple[Rational, ...]
    vcan: Tuple[Tuple[int, Tuple[Rational, ...]], ...]

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(d for d, _ in self.vcan)

    @property
    def slodowy_basis(self) -> Tuple[Tuple[Rational, ...], ...]:
        return tuple(v for _, v in self.vcan)

    @cached_property
    def ring(self):
        return ring([f"c{k + 1}" for k in range(len(self.vcan))], QQ)[0]

    def point(self, values: Sequence) -> Coords:
        out = list(self.p_minus1)
        for c, v in zip(values, self.slodowy_basis):
            for a, x in enumerate(v):
                out[a] += Rational(c) * x
        return out

    def check(self) -> Dict[str, bool]:
        g = self.realization
        h = g.bracket_coords(self.two_rho_vee, self.p_1)
        hm = g.bracket_coords(self.two_rho_vee, self.p_minus1)
        e = g.bracket_coords(self.p_1, self.p_minus1)
        centralizer = all(
            not any(g.bracket_coords(self.p_1, v)) for v in self.slodowy_basis
        )
        return {
            "raise": h == [2 * x for x in self.p_1],
            "lower": hm == [-2 * x for x in self.p_minus1],
            "bracket": e == list(self.two_rho_vee),
            "centralizer": centralizer,
            "dimension": len(self.vcan) == g.rank,
        }

    def to_dict(self) -> Dict:
        return {
            "algebra": self.realization.name,
            "p_minus1": list(self.p_minus1),
            "two_rho_vee": list(self.two_rho_vee),
            "p_1": list(self.p_1),
            "vcan": [{"degree": d, "coords": list(v)} for d, v in self.vcan],
            "exponents": list(self.exponents),
            "checks": self.check(),
        }


def _sum_coords(g: MatrixRealization, matrices) -> Tuple[Rational, ...]:
    out = [Rational(0)] * g.dim
    for m in matrices:
        for a, v in enumerate(g.coordinates(m)):
            out[a] += v
    return tuple(out)


@lru_cache(maxsize=None)
def _principal_cached(name: str, g: MatrixRealization) -> KostantSection:
    p_minus1 = _sum_coords(g, g.f)
    two_rho = tuple(g.coordinates(g.two_rho_vee))

    degree_one = g.graded_indices(1)
    images = [g.bracket_coords([int(k == b) for k in range(g.dim)], p_minus1) for b in degree_one]
    solution = solve(columns_matrix(images, g.dim), two_rho)
    if solution is None:
        raise ComputationError(f"{name}: no p_1 with [p_1, p_-1] = 2 rho^vee")
    p_1 = [Rational(0)] * g.dim
    for b, y in zip(degree_one, solution):
        p_1[b] = y

    vcan = []
    for degree in range(1, g.max_degree + 1):
        indices = g.graded_indices(degree)
        images = [g.bracket_coords(p_1, [int(k == b) for k in range(g.dim)]) for b in indices]
        for kernel in nullspace(columns_matrix(images, g.dim)):
            vector = [Rational(0)] * g.dim
            for b, y in zip(indices, kernel):
                vector[b] = y
            vcan.append((degree, tuple(vector)))

    section = KostantSection(
        realization=g,
        p_minus1=p_minus1,
        two_rho_vee=two_rho,
        p_1=tuple(p_1),
        vcan=tuple(vcan),
    )
    failed = [k for k, ok in section.check().items() if not ok]
    if failed:
        raise ComputationError(f"{name}: principal triple check failed", checks=failed)
    logger.debug(f"Principal triple of {name}: exponents {section.exponents}")
    return section


def principal_triple(g: MatrixRealization) -> KostantSection:
    return _principal_cached(g.name, g)


def vcan_basis(g: MatrixRealization) -> Tuple[Tuple[int, Tuple[Rational, ...]], ...]:
    """Graded basis of V_can = n^{p_1}"""
    return principal_triple(g).vcan


def restrict_to_section(p, section: KostantSection) -> PolyElement:
    """P(p_-1 + sum c_k v_k) in the section coordinates c_k"""
    poly = p.poly if isinstance(p, InvariantPoly) else p
    return substitute_affine(poly, section.p_minus1, section.slodowy_basis, section.ring)


def section_point(section: KostantSection, values: Sequence, generators: Optional[Sequence] = None) -> Coords:
    """Section point p_-1 + sum c_k v_k at which the generators take the given values

    The restricted generators are triangular: P_j restricted is linear in
    c_j modulo the coordinates of lower degree.
    """
    g = section.realization
    generators = list(generators) if generators is not None else chevalley_generators(g)
    if len(values) != len(generators):
        raise InvalidInputError(f"expected {len(generators)} invariant values", received=len(values))
    restricted = [restrict_to_section(p, section) for p in generators]
    gens = section.ring.gens
    order = sorted(range(len(generators)), key=lambda j: generators[j].degree)
    exponent_order = sorted(range(len(gens)), key=lambda k: section.exponents[k])
    known: List[Tuple[PolyElement, Rational]] = []
    coords = [Rational(0)] * len(gens)
    for j, k in zip(order, exponent_order):
        current = restricted[j].subs([(gen, QQ.convert(v)) for gen, v in known]) if known else restricted[j]
        slope = current.diff(gens[k])
        if not slope or not slope.is_ground:
            raise ComputationError("restricted invariants are not triangular", generator=generators[j].name)
        constant = current.subs([(gens[k], QQ.zero)])
        value = (Rational(values[j]) - ground_value(constant)) / ground_value(slope)
        coords[k] = value
        known.append((gens[k], value))
    return section.point(coords)


# ============================================
# sigma-fixed section
# ============================================
def _matrix_span(g: MatrixRealization, vectors) -> List[List[Rational]]:
    return [flatten(g.element(v)) for v in vectors]


def _same_span(a: List[List[Rational]], b: List[List[Rational]]) -> bool:
    if not a or not b:
        return not a and not b
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(a + b)


def sigma_fixed_vcan(g: MatrixRealization) -> List[Tuple[int, Tuple[Rational, ...]]]:
    """Graded basis of V_can^sigma"""
    section = principal_triple(g)
    out = []
    s = g.sigma_operator
    for degree in sorted(set(section.exponents)):
        vectors = [v for d, v in section.vcan if d == degree]
        images = [apply(s, v) for v in vectors]
        differences = [[x - y for x, y in zip(im, v)] for im, v in zip(images, vectors)]
        for kernel in nullspace(columns_matrix(differences, g.dim)):
            combo = [Rational(0)] * g.dim
            for y, v in zip(kernel, vectors):
                for a, x in enumerate(v):
                    combo[a] += y * x
            out.append((degree, tuple(combo)))
    return out


def sigma_section_check(g: MatrixRealization) -> Dict:
    """(p_-1 + g^{p_1})^sigma against p_-1 + g_sigma^{p_1} and the invariant coordinates on both"""
    h = folded_realization(g)
    section_g = principal_triple(g)
    section_h = principal_triple(h)

    same_p_minus1 = (g.element(section_g.p_minus1) - h.element(section_h.p_minus1)).is_zero_matrix
    same_p_1 = (g.element(section_g.p_1) - h.element(section_h.p_1)).is_zero_matrix
    fixed = sigma_fixed_vcan(g)
    subspace_equal = _same_span(_matrix_span(g, [v for _, v in fixed]), _matrix_span(h, section_h.slodowy_basis))

    # the sigma-fixed section of g parametrized by the vcan basis of g_sigma
    directions = [tuple(g.coordinates(h.element(v))) for v in section_h.slodowy_basis]
    base = tuple(g.coordinates(h.element(section_h.p_minus1)))
    gens_g = chevalley_generators(g)
    gens_h = chevalley_generators(h)
    restricted_g = [substitute_affine(p.poly, base, directions, section_h.ring) for p in gens_g]
    restricted_h = [restrict_to_section(p, section_h) for p in gens_h]

    surviving = [(p, r) for p, r in zip(gens_g, restricted_g) if r]
    vanishing = [p.degree for p, r in zip(gens_g, restricted_g) if not r]
    by_degree = {p.degree: r for p, r in zip(gens_h, restricted_h)}
    rows = []
    for p, r in surviving:
        target = by_degree.get(p.degree)
        ratio = None
        if target is not None and target:
            quotient, remainder = r.div(target)
            if not remainder and quotient.is_ground and quotient:
                ratio = ground_value(quotient)
        rows.append({"degree": p.degree, "ratio": ratio, "matched": ratio is not None})

    if surviving and len(surviving) == h.rank:
        det = jacobian_determinant([r for _, r in surviving])
        invertible = bool(det) and det.is_ground
        det_value = ground_value(det) if invertible else None
    else:
        invertible = False
        det_value = None
    degrees_match = sorted(p.degree for p, _ in surviving) == sorted(p.degree for p in gens_h)

    passed = (
        same_p_minus1
        and same_p_1
        and subspace_equal
        and degrees_match
        and invertible
        and all(row["matched"] for row in rows)
    )
    return {
        "algebra": g.name,
        "folded": h.name,
        "p_minus1_fixed": same_p_minus1,
        "p_1_fixed": same_p_1,
        "fixed_vcan_degrees": [d for d, _ in fixed],
        "folded_exponents": list(section_h.exponents),
        "subspace_equal": subspace_equal,
        "vanishing_degrees": vanishing,
        "matched": rows,
        "jacobian": det_value,
        "coordinate_change_invertible": invertible,
        "passed": passed,
    }


# ============================================
# Regularity and Mishchenko-Fomenko families
# ============================================
def regular(g: MatrixRealization, coords: Sequence) -> bool:
    """rank ad x = dim g - rank g"""
    return rank(g.ad(coords)) == g.dim - g.rank


def chi_from_values(g: MatrixRealization, values: Sequence) -> Coords:
    """chi from diagonal entries or h_i coefficients"""
    return g.coordinates(g.cartan_element(values))


def sample_point(rng: random.Random, dim: int) -> List[int]:
    low, high = sample_bounds()
    return [rng.randint(low, high) for _ in range(dim)]


@dataclass(frozen=True, eq=False)
class MFFamily:
    realization: MatrixRealization = field(repr=False)
    chi: Tuple[Rational, ...]
    members: Tuple[Tuple[str, int, PolyElement], ...] = field(repr=False)
    jacobian_rank: int
    sample: Tuple[int, ...]
    regular: bool

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def nonzero(self) -> int:
        return sum(1 for _, _, p in self.members if p)

    def to_dict(self) -> Dict:
        dim_b = len(self.realization.borel_indices)
        return {
            "algebra": self.realization.name,
            "chi": list(self.chi),
            "regular": self.regular,
            "count": self.count,
            "nonzero": self.nonzero,
            "dim_b": dim_b,
            "jacobian_rank": self.jacobian_rank,
            "sample": list(self.sample),
            "members": [{"generator": name, "order": i, "degree": total_degree(p)} for name, i, p in self.members],
            "passed": self.count == dim_b and (not self.regular or self.jacobian_rank == dim_b),
        }


def mf_family(g: MatrixRealization, chi: Sequence, seed: Optional[int] = None) -> MFFamily:
    """{d^i_chi P_j : 0 <= i < deg P_j} with the Jacobian rank at seeded points"""
    chi = [Rational(c) for c in chi]
    if len(chi) != g.dim:
        raise InvalidInputError(f"chi must have {g.dim} coordinates for {g.name}", received=len(chi))
    members = []
    for p in chevalley_generators(g):
        current = p.poly
        for i in range(p.degree):
            members.append((p.name, i, current))
            current = directional(current, chi)
    R, xs = coordinate_ring(g.dim)
    gradients = [[q.diff(x) for x in xs] for _, _, q in members]
    dim_b = len(g.borel_indices)

    rng = random.Random(SEED if seed is None else seed)
    best, best_point = -1, ()
    for attempt in range(MAX_RESAMPLES):
        point = sample_point(rng, g.dim)
        values = [[evaluate(d, point) for d in row] for row in gradients]
        r = rank(values)
        if r > best:
            best, best_point = r, tuple(point)
        if best == dim_b:
            break
        logger.debug(f"MF rank {r} < {dim_b} at sample {attempt}, resampling")
    return MFFamily(
        realization=g,
        chi=tuple(chi),
        members=tuple(members),
        jacobian_rank=best,
        sample=best_point,
        regular=regular(g, chi),
    )


# ============================================
# Compatible pairs
# ============================================
POLICIES = ("zero", "random", "explicit")


@dataclass(frozen=True)
class CompatiblePair:
    algebra: str
    folded: str
    policy: str
    chi: Tuple[Rational, ...]
    chi_prime: Tuple[Rational, ...]
    values: Tuple[Dict, ...]
    regular: bool
    attempts: int
    seed: Optional[int]

    @property
    def passed(self) -> bool:
        return all(row["match"] for row in self.values)

    def to_dict(self) -> Dict:
        return {
            "algebra": self.algebra,
            "folded": self.folded,
            "policy": self.policy,
            "chi": list(self.chi),
            "chi_prime": list(self.chi_prime),
            "values": list(self.values),
            "regular": self.regular,
            "attempts": self.attempts,
            "seed": self.seed,
            "passed": self.passed,
        }


def _invariant_values(g: MatrixRealization, h: MatrixRealization, chi_g: Sequence, chi_h: Sequence) -> List[Dict]:
    values_h = {p.degree: p.evaluate(chi_h) for p in chevalley_generators(h)}
    rows = []
    for p in chevalley_generators(g):
        value = p.evaluate(chi_g)
        if p.degree in values_h:
            rows.append({"degree": p.degree, "g": value, "g_sigma": values_h[p.degree], "match": value == values_h[p.degree]})
        else:
            rows.append({"degree": p.degree, "g": value, "g_sigma": None, "match": value == 0})
    return rows


def compatible_pair(
    g: MatrixRealization,
    policy: str = "random",
    chi: Optional[Sequence] = None,
    seed: Optional[int] = None,
) -> CompatiblePair:
    """chi in the sigma-fixed Cartan of g and chi' the same element read in g_sigma

    Both project to the same point of h_sigma // W^sigma; the certificate
    compares the invariant values of both systems.
    """
    if policy not in POLICIES:
        raise InvalidInputError(f"unknown policy '{policy}'", supported=list(POLICIES))
    h = folded_realization(g)
    seed = SEED if seed is None else seed
    attempts = 0

    if policy == "zero":
        matrix = g.element([0] * g.dim)
    elif policy == "explicit":
        if chi is None:
            raise InvalidInputError("explicit policy needs chi")
        matrix = g.cartan_element(chi) if len(chi) in (g.n, g.rank) else g.element(chi)
        if g.sigma is not None and not (g.sigma_matrix(matrix) - matrix).is_zero_matrix:
            raise InvalidInputError("chi must be sigma-fixed")
        if not h.contains(matrix) or any(h.coordinates(matrix)[k] for k in range(h.rank, h.dim)):
            raise InvalidInputError(f"chi must lie in the Cartan subalgebra of {h.name}")
    else:
        rng = random.Random(seed)
        low, high = sample_bounds()
        matrix = None
        for attempts in range(1, MAX_RESAMPLES + 1):
            coeffs = [rng.randint(low, high) for _ in range(h.rank)]
            candidate = h.cartan_element(coeffs)
            if regular(g, g.coordinates(candidate)):
                matrix = candidate
                break
            logger.warning(f"Sampled chi {coeffs} is not regular in {g.name}, resampling")
        if matrix is None:
            raise InconclusiveError(f"no regular chi found in {MAX_RESAMPLES} samples", algebra=g.name)

    chi_g = g.coordinates(matrix)
    chi_h = h.coordinates(matrix)
    pair = CompatiblePair(
        algebra=g.name,
        folded=h.name,
        policy=policy,
        chi=tuple(chi_g),
        chi_prime=tuple(chi_h),
        values=tuple(_invariant_values(g, h, chi_g, chi_h)),
        regular=regular(g, chi_g),
        attempts=attempts,
        seed=seed if policy == "random" else None,
    )
    if not pair.passed:
        raise ComputationError("compatible pair certificate failed", values=list(pair.values))
    return pair


# ============================================
# Harish-Chandra, quadratic part
# ============================================
def casimir_form_value(g: MatrixRealization, labels: Sequence) -> Rational:
    """(lambda, lambda + 2 rho) in the form induced by kappa"""
    m = Matrix([Rational(v) for v in labels])
    k_inv = Matrix(g.cartan_form).inv()
    shifted = m + Matrix([2] * g.rank)
    return Rational((m.T * k_inv * shifted)[0, 0])


def hc_quadratic(g: MatrixRealization, labels: Sequence, cap: Optional[int] = None) -> Dict:
    """Scalar of C = sum X_a X^a on V(lambda) from the highest-weight vector"""
    datum = g.datum
    weight = datum.weight_from_labels([int(v) for v in labels])
    module = construct_module(datum, weight, cap=cap)
    ops = module_representation(module, g)
    v0 = [Rational(int(k == 0)) for k in range(module.dim)]
    images = [apply(op, v0) for op in ops]
    dual = g.dual_basis
    result = [Rational(0)] * module.dim
    for a in range(g.dim):
        # X^a v0 = sum_b dual[a][b] X_b v0
        w = [Rational(0)] * module.dim
        for b, c in enumerate(dual[a]):
            if c:
                for k, x in enumerate(images[b]):
                    if x:
                        w[k] += c * x
        if any(w):
            for k, x in enumerate(apply(ops[a], w)):
                result[k] += x
    value = result[0]
    eigen = all(x == (value if k == 0 else 0) for k, x in enumerate(result))
    expected = casimir_form_value(g, labels)
    return {
        "algebra": g.name,
        "highest_weight": [int(v) for v in labels],
        "dim": module.dim,
        "casimir": value,
        "eigenvector": eigen,
        "formula": expected,
        "passed": eigen and value == expected,
    }


def hc_canonical_check(g: MatrixRealization, weights: Sequence[Sequence[int]], cap: Optional[int] = None) -> Dict:
    """chi_lambda(C_g) = c chi_lambda(C_dual) + const over sigma-invariant lambda

    C_dual is the Casimir of the realization of invariant_fold(g, sigma),
    the datum carrying W(lambda). (c, const) is fitted on the first two
    weights and verified on the rest.
    """
    if len(weights) < 3:
        raise InvalidInputError("need at least three sigma-invariant weights")
    datum = g.datum
    folded = invariant_fold(datum, g.sigma)
    dual_g, node_map = realization_for_cartan(folded.cartan.entries)

    rows = []
    for labels in weights:
        weight = datum.weight_from_labels([int(v) for v in labels])
        restricted = restrict_weight(weight, folded).int_labels()
        dual_labels = [0] * dual_g.rank
        for k, v in enumerate(restricted):
            dual_labels[node_map[k]] = v
        rows.append(
            {
                "labels": [int(v) for v in labels],
                "folded_labels": dual_labels,
                "g": hc_quadratic(g, labels, cap=cap)["casimir"],
                "dual": hc_quadratic(dual_g, dual_labels, cap=cap)["casimir"],
            }
        )
    (x1, y1), (x2, y2) = [(r["dual"], r["g"]) for r in rows[:2]]
    if x1 == x2:
        raise InvalidInputError("fitting weights give equal folded Casimir values")
    c = (y1 - y2) / (x1 - x2)
    const = y1 - c * x1
    for row in rows:
        row["predicted"] = c * row["dual"] + const
        row["match"] = row["predicted"] == row["g"]
    return {
        "algebra": g.name,
        "dual_folded": dual_g.name,
        "slope": c,
        "constant": const,
        "rows": rows,
        "passed": all(r["match"] for r in rows[2:]),
    }


__all__ = [
    "coordinate_ring",
    "ground_value",
    "directional",
    "evaluate",
    "substitute_affine",
    "jacobian_determinant",
    "InvariantPoly",
    "generic_charpoly",
    "invariance_check",
    "chevalley_generators",
    "chevalley_report",
    "KostantSection",
    "principal_triple",
    "vcan_basis",
    "restrict_to_section",
    "section_point",
    "sigma_fixed_vcan",
    "sigma_section_check",
    "regular",
    "chi_from_values",
    "MFFamily",
    "mf_family",
    "POLICIES",
    "CompatiblePair",
    "compatible_pair",
    "casimir_form_value",
    "hc_quadratic",
    "hc_canonical_check",
]
