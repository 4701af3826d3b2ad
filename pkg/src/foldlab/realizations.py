"""
Concrete matrix Lie algebras with exact bases.

sl_n carries the diagram automorphism sigma(X) = -J X^T J^{-1} with
J_{i, n+1-i} = (-1)^{i+1}, which sends e_i to e_{n-i}. The symplectic and
odd orthogonal algebras are shipped as the sigma-fixed subalgebras of
sl_{2m} and sl_{2m+1}, so "fixed subalgebra = folded realization" holds at
the level of matrices.

Basis order is Cartan, then positive root vectors by height, then negative
root vectors in the same order.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.polys.matrices import DomainMatrix

from src.foldlab.errors import ComputationError, InvalidInputError
from src.foldlab.folding import DiagramAutomorphism, validate_automorphism
from src.foldlab.linalg import commutator, dm, entries_of, inverse, rows_of, same, scaled, sparse, trace, zeros
from src.foldlab.rootdata import CartanMatrix, RootDatum, identify_cartan_type

logger = logging.getLogger(__name__)

FOLDINGS = {"sl3": "so3", "sl4": "sp4", "sl5": "so5", "sl6": "sp6", "sl7": "so7"}
SUPPORTED = ("sl2", "sl3", "sl4", "sl5", "sl6", "sl7", "so3", "sp4", "so5", "sp6", "so7")


def unit(n: int, i: int, j: int, value=1) -> DomainMatrix:
    return sparse({(i, j): value}, (n, n))


def flatten(matrix: DomainMatrix) -> List[Rational]:
    n, m = matrix.shape
    out = [Rational(0)] * (n * m)
    for (i, j), v in entries_of(matrix).items():
        out[i * m + j] = v
    return out


@dataclass(frozen=True, eq=False)
class MatrixRealization:
    """Matrix Lie algebra with a fixed pinning and the trace form as kappa"""

    name: str
    n: int
    basis: Tuple[DomainMatrix, ...] = field(repr=False)
    labels: Tuple[str, ...] = field(repr=False)
    cartan: CartanMatrix = field(repr=False)
    e: Tuple[DomainMatrix, ...] = field(repr=False)
    f: Tuple[DomainMatrix, ...] = field(repr=False)
    h: Tuple[DomainMatrix, ...] = field(repr=False)
    num_positive: int = 0
    sigma: Optional[DiagramAutomorphism] = None
    parent: Optional[str] = None

    # ------------------------------------------------------------------
    # Shape of the basis
    # ------------------------------------------------------------------
    @property
    def rank(self) -> int:
        return self.cartan.size

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def cartan_indices(self) -> range:
        return range(0, self.rank)

    @property
    def positive_indices(self) -> range:
        return range(self.rank, self.rank + self.num_positive)

    @property
    def negative_indices(self) -> range:
        return range(self.rank + self.num_positive, self.dim)

    @property
    def borel_indices(self) -> range:
        return range(0, self.rank + self.num_positive)

    @cached_property
    def datum(self) -> RootDatum:
        return RootDatum.from_cartan(self.cartan.entries, "simply_connected")

    # ------------------------------------------------------------------
    # Coordinates
    # ------------------------------------------------------------------
    @cached_property
    def _solver(self) -> Tuple[DomainMatrix, DomainMatrix]:
        columns = dm([flatten(x) for x in self.basis]).transpose()
        left = inverse(columns.transpose() * columns) * columns.transpose()
        return columns, left

    def coordinates(self, matrix: DomainMatrix) -> List[Rational]:
        columns, left = self._solver
        vector = dm([[v] for v in flatten(matrix)], 1)
        coords = left * vector
        if not same(columns * coords, vector):
            raise InvalidInputError(f"matrix does not lie in {self.name}")
        return [row[0] for row in rows_of(coords)]

    def contains(self, matrix: DomainMatrix) -> bool:
        try:
            self.coordinates(matrix)
        except InvalidInputError:
            return False
        return True

    def element(self, coords: Sequence) -> DomainMatrix:
        out = zeros(self.n, self.n)
        for c, x in zip(coords, self.basis):
            if c:
                out = out + scaled(x, c)
        return out

    def cartan_element(self, values: Sequence) -> DomainMatrix:
        """Element of h from diagonal entries (length n) or h_i coefficients (length rank)"""
        values = [Rational(v) for v in values]
        if len(values) == self.n:
            matrix = sparse({(i, i): v for i, v in enumerate(values)}, (self.n, self.n))
            coords = self.coordinates(matrix)
            if any(coords[k] for k in range(self.rank, self.dim)):
                raise InvalidInputError(f"diagonal matrix is not in the Cartan subalgebra of {self.name}")
            return matrix
        if len(values) == self.rank:
            out = zeros(self.n, self.n)
            for v, h in zip(values, self.h):
                out = out + scaled(h, v)
            return out
        raise InvalidInputError(
            f"expected {self.n} diagonal entries or {self.rank} Cartan coefficients for {self.name}",
            received=len(values),
        )

    # ------------------------------------------------------------------
    # Bracket, form and grading
    # ------------------------------------------------------------------
    @cached_property
    def structure(self) -> Tuple[Tuple[Tuple[Rational, ...], ...], ...]:
        """structure[a][b] = coordinates of [X_a, X_b]"""
        out = []
        for x in self.basis:
            out.append(tuple(tuple(self.coordinates(commutator(x, y))) for y in self.basis))
        return tuple(out)

    def bracket_coords(self, a: Sequence, b: Sequence) -> List[Rational]:
        out = [Rational(0)] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                for k, c in enumerate(self.structure[i][j]):
                    if c:
                        out[k] += ai * bj * c
        return out

    def ad(self, coords: Sequence) -> DomainMatrix:
        """Matrix of ad x on coordinates"""
        entries = {}
        for b in range(self.dim):
            image = self.bracket_coords(coords, [int(k == b) for k in range(self.dim)])
            for a, v in enumerate(image):
                if v:
                    entries[(a, b)] = v
        return sparse(entries, (self.dim, self.dim))

    @cached_property
    def kappa(self) -> DomainMatrix:
        """Trace form kappa(X_a, X_b) = tr(X_a X_b)"""
        entries = {}
        for a, x in enumerate(self.basis):
            for b, y in enumerate(self.basis):
                value = trace(x * y)
                if value:
                    entries[(a, b)] = value
        return sparse(entries, (self.dim, self.dim))

    @cached_property
    def kappa_inverse(self) -> DomainMatrix:
        return inverse(self.kappa)

    @cached_property
    def dual_basis(self) -> Tuple[Tuple[Rational, ...], ...]:
        """Coordinates of X^a with kappa(X_a, X^b) = delta_ab"""
        inv = rows_of(self.kappa_inverse)
        return tuple(tuple(inv[b][a] for b in range(self.dim)) for a in range(self.dim))

    @cached_property
    def cartan_form(self) -> List[List[Rational]]:
        """kappa(h_i, h_j)"""
        return [[trace(x * y) for y in self.h] for x in self.h]

    @cached_property
    def two_rho_vee_coeffs(self) -> Tuple[Rational, ...]:
        """c with sum_i c_i a_ij = 2 for every j"""
        a = Matrix(self.cartan.entries)
        c = a.T.solve(Matrix([2] * self.rank))
        return tuple(Rational(v) for v in c)

    @cached_property
    def two_rho_vee(self) -> DomainMatrix:
        out = zeros(self.n, self.n)
        for c, h in zip(self.two_rho_vee_coeffs, self.h):
            out = out + scaled(h, c)
        return out

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        """ad rho^vee eigenvalue of each basis element"""
        out = []
        for index, x in enumerate(self.basis):
            image = commutator(self.two_rho_vee, x)
            value = self.coordinates(image)[index] / 2
            if not same(image, scaled(x, 2 * value)):
                raise ComputationError(f"basis element of {self.name} is not homogeneous")
            out.append(int(value))
        return tuple(out)

    def graded_indices(self, degree: int) -> List[int]:
        return [k for k, d in enumerate(self.degrees) if d == degree]

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    # ------------------------------------------------------------------
    # Diagram automorphism
    # ------------------------------------------------------------------
    @cached_property
    def _j(self) -> DomainMatrix:
        n = self.n
        return sparse({(i, n - 1 - i): (-1) ** i for i in range(n)}, (n, n))

    def sigma_matrix(self, matrix: DomainMatrix) -> DomainMatrix:
        if self.sigma is None:
            raise InvalidInputError(f"{self.name} carries no diagram automorphism")
        j = self._j
        return scaled(j * matrix.transpose() * j.transpose(), -1)

    def sigma_inverse_matrix(self, matrix: DomainMatrix) -> DomainMatrix:
        out = matrix
        for _ in range(self.sigma.order - 1):
            out = self.sigma_matrix(out)
        return out

    @cached_property
    def sigma_operator(self) -> DomainMatrix:
        """sigma on coordinates (columns are images of basis elements)"""
        entries = {}
        for b, x in enumerate(self.basis):
            for a, v in enumerate(self.coordinates(self.sigma_matrix(x))):
                if v:
                    entries[(a, b)] = v
        return sparse(entries, (self.dim, self.dim))

    def check(self) -> Dict[str, bool]:
        """Bracket closure, kappa invariance and sigma compatibility"""
        closure = all(len(row) == self.dim for row in self.structure)
        k = self.kappa
        invariant = True
        for a in range(self.dim):
            ad = self.ad([int(i == a) for i in range(self.dim)])
            invariant &= (ad.transpose() * k + k * ad).is_zero_matrix
        result = {"closure": closure, "kappa_invariant": invariant}
        if self.sigma is not None:
            s = self.sigma_operator
            preserves_bracket = True
            for a in range(self.dim):
                for b in range(self.dim):
                    lhs = self.coordinates(self.sigma_matrix(commutator(self.basis[a], self.basis[b])))
                    rhs = self.coordinates(commutator(self.sigma_matrix(self.basis[a]), self.sigma_matrix(self.basis[b])))
                    preserves_bracket &= lhs == rhs
            pinning = all(
                same(self.sigma_matrix(self.e[i]), self.e[self.sigma(i)])
                and same(self.sigma_matrix(self.f[i]), self.f[self.sigma(i)])
                for i in range(self.rank)
            )
            result.update(
                {
                    "sigma_bracket": preserves_bracket,
                    "sigma_kappa": same(s.transpose() * k * s, k),
                    "sigma_pinning": pinning,
                }
            )
        return result

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "matrix_size": self.n,
            "dim": self.dim,
            "rank": self.rank,
            "cartan": self.cartan.to_list(),
            "basis": list(self.labels),
            "sigma": self.sigma.to_dict() if self.sigma is not None else None,
        }


# ============================================
# Constructors
# ============================================
def special_linear(n: int) -> MatrixRealization:
    if n < 2:
        raise InvalidInputError("sl_n needs n >= 2")
    cartan = [unit(n, i, i) - unit(n, i + 1, i + 1) for i in range(n - 1)]
    pairs = sorted(((i, j) for i in range(n) for j in range(i + 1, n)), key=lambda p: (p[1] - p[0], p[0]))
    positive = [unit(n, i, j) for i, j in pairs]
    negative = [unit(n, j, i) for i, j in pairs]
    labels = (
        [f"h{i + 1}" for i in range(n - 1)]
        + [f"E{i + 1}{j + 1}" for i, j in pairs]
        + [f"E{j + 1}{i + 1}" for i, j in pairs]
    )
    cartan_matrix = CartanMatrix(
        tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n - 1)) for i in range(n - 1))
    )
    datum = RootDatum.from_cartan(cartan_matrix.entries)
    sigma = validate_automorphism([n - 1 - i for i in range(n - 1)], datum)
    return MatrixRealization(
        name=f"sl{n}",
        n=n,
        basis=tuple(cartan + positive + negative),
        labels=tuple(labels),
        cartan=cartan_matrix,
        e=tuple(unit(n, i, i + 1) for i in range(n - 1)),
        f=tuple(unit(n, i + 1, i) for i in range(n - 1)),
        h=tuple(cartan),
        num_positive=len(pairs),
        sigma=sigma,
    )


def _signed_image(parent: MatrixRealization, index: int) -> Tuple[int, Rational]:
    coords = parent.coordinates(parent.sigma_matrix(parent.basis[index]))
    support = [(k, v) for k, v in enumerate(coords) if v]
    if len(support) != 1 or abs(support[0][1]) != 1:
        raise ComputationError("sigma does not permute the root basis up to sign", element=parent.labels[index])
    return support[0]


def _cartan_from_brackets(h, e) -> CartanMatrix:
    size = len(h)
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            image = commutator(h[i], e[j])
            (pos, ref), = list(entries_of(e[j]).items())[:1]
            value = entries_of(image).get(pos, Rational(0)) / ref
            if not same(image, scaled(e[j], value)):
                raise ComputationError("Chevalley generators are not eigenvectors of the Cartan")
            row.append(int(value))
        rows.append(tuple(row))
    return CartanMatrix(tuple(rows))


def fixed_subalgebra(parent: MatrixRealization, name: str) -> MatrixRealization:
    """sigma-fixed subalgebra of parent with its folded Chevalley generators

    f_eta = sum f_i, and e_eta, h_eta are the orbit sums doubled on
    adjacent-pair orbits.
    """
    if parent.sigma is None:
        raise InvalidInputError(f"{parent.name} carries no diagram automorphism")
    orbits = parent.sigma.orbits(parent.cartan)
    n = parent.n

    def orbit_sum(mats, eta, factor=1):
        out = zeros(n, n)
        for i in eta.nodes:
            out = out + mats[i]
        return scaled(out, factor)

    h = [orbit_sum(parent.h, eta, eta.coroot_factor) for eta in orbits]
    e = [orbit_sum(parent.e, eta, eta.coroot_factor) for eta in orbits]
    f = [orbit_sum(parent.f, eta) for eta in orbits]

    def fixed_part(indices) -> Tuple[List[DomainMatrix], List[str]]:
        mats, names = [], []
        for b in indices:
            k, sign = _signed_image(parent, b)
            if k == b:
                if sign == 1:
                    mats.append(parent.basis[b])
                    names.append(parent.labels[b])
            elif b < k:
                mats.append(parent.basis[b] + scaled(parent.basis[k], sign))
                names.append(f"{parent.labels[b]}{'+' if sign == 1 else '-'}{parent.labels[k]}")
        return mats, names

    positive, pos_names = fixed_part(parent.positive_indices)
    negative, neg_names = fixed_part(parent.negative_indices)
    cartan = _cartan_from_brackets(h, e)
    realization = MatrixRealization(
        name=name,
        n=n,
        basis=tuple(h + positive + negative),
        labels=tuple([f"h{k + 1}" for k in range(len(h))] + pos_names + neg_names),
        cartan=cartan,
        e=tuple(e),
        f=tuple(f),
        h=tuple(h),
        num_positive=len(positive),
        parent=parent.name,
    )
    logger.debug(f"Built {name} inside {parent.name}: dim {realization.dim}")
    return realization


@lru_cache(maxsize=None)
def get_realization(name: str) -> MatrixRealization:
    key = str(name).strip().lower().replace("_", "")
    if key not in SUPPORTED:
        raise InvalidInputError(f"unsupported algebra '{name}'", supported=list(SUPPORTED))
    if key.startswith("sl"):
        return special_linear(int(key[2:]))
    for parent, child in FOLDINGS.items():
        if child == key:
            return fixed_subalgebra(get_realization(parent), key)
    raise InvalidInputError(f"unsupported algebra '{name}'")


def folded_realization(g: MatrixRealization) -> MatrixRealization:
    if g.name == "sl2":
        return g
    if g.name not in FOLDINGS:
        raise InvalidInputError(f"no folded realization registered for {g.name}", supported=sorted(FOLDINGS))
    return get_realization(FOLDINGS[g.name])


def realization_for_cartan(entries) -> Tuple[MatrixRealization, Tuple[int, ...]]:
    """Shipped realization of the given type and the node correspondence

    Returns (g, node_map) with node_map[k] the node of g matching node k of
    the given Cartan matrix.
    """
    series, rank, given = identify_cartan_type(entries)
    name = {"A": f"sl{rank + 1}", "B": f"so{2 * rank + 1}", "C": f"sp{2 * rank}"}.get(series)
    if series == "B" and rank == 1:
        name = "so3"
    if name is None or name not in SUPPORTED:
        raise InvalidInputError(f"no matrix realization for type {series}{rank}")
    g = get_realization(name)
    _, _, own = identify_cartan_type(g.cartan.entries)
    bourbaki_to_g = {b: k for k, b in enumerate(own)}
    return g, tuple(bourbaki_to_g[given[k]] for k in range(rank))


__all__ = [
    "FOLDINGS",
    "SUPPORTED",
    "unit",
    "flatten",
    "MatrixRealization",
    "special_linear",
    "fixed_subalgebra",
    "get_realization",
    "folded_realization",
    "realization_for_cartan",
]
