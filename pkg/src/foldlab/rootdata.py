"""
Root data of finite type: Cartan matrices, lattices, roots and Weyl group
utilities.

Conventions
-----------
- Nodes follow Bourbaki numbering; internally indices are 0-based.
- Cartan entries satisfy a_ij = <alpha_j, alpha_i^vee>, so the pairing of the
  datum reproduces the matrix through <alpha_i, alpha_j^vee> = a_ji.
- A datum stores its simple roots in a basis of X, its simple coroots in a
  basis of X^vee and the integer pairing between the two bases. Weights are
  coordinate vectors in the basis of X; their Dynkin labels are the
  pairings with the simple coroots.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from src.foldlab.errors import InvalidInputError, ComputationError

logger = logging.getLogger(__name__)

SERIES = ("A", "B", "C", "D", "E", "F", "G")
SIMPLY_CONNECTED = "simply_connected"
ADJOINT = "adjoint"
OTHER = "other"
ISOGENIES = (SIMPLY_CONNECTED, ADJOINT, OTHER)

_ISOGENY_ALIASES = {
    "sc": SIMPLY_CONNECTED,
    "simply_connected": SIMPLY_CONNECTED,
    "simply-connected": SIMPLY_CONNECTED,
    "ad": ADJOINT,
    "adj": ADJOINT,
    "adjoint": ADJOINT,
    "other": OTHER,
}


def normalize_isogeny(label: str) -> str:
    key = str(label).strip().lower()
    if key not in _ISOGENY_ALIASES:
        raise InvalidInputError(f"unknown isogeny label '{label}'", isogeny=label)
    return _ISOGENY_ALIASES[key]


# ============================================
# Cartan matrices
# ============================================
def _check_type(series: str, rank: int):
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4}
    if series in minimum:
        ok = rank >= minimum[series]
    elif series == "E":
        ok = rank in (6, 7, 8)
    elif series == "F":
        ok = rank == 4
    elif series == "G":
        ok = rank == 2
    else:
        ok = False
    if not ok:
        raise InvalidInputError(
            f"no finite root system of type {series}{rank}", series=series, rank=rank
        )


@lru_cache(maxsize=None)
def cartan_entries(series: str, rank: int) -> Tuple[Tuple[int, ...], ...]:
    """Standard Cartan matrix (Bourbaki numbering, a_ij = <alpha_j, alpha_i^vee>)"""
    series = str(series).upper()
    _check_type(series, rank)
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1):
        a[i - 1][j - 1] = aij
        a[j - 1][i - 1] = aji

    if series in "ABC":
        for i in range(1, rank):
            link(i, i + 1)
        if series == "B":
            link(rank - 1, rank, -1, -2)
        elif series == "C":
            link(rank - 1, rank, -2, -1)
    elif series == "D":
        for i in range(1, rank - 1):
            link(i, i + 1)
        link(rank - 2, rank)
    elif series == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, rank):
            link(i, i + 1)
    elif series == "F":
        link(1, 2)
        # alpha_3 is short: a_32 = -2
        link(2, 3, -1, -2)
        link(3, 4)
    elif series == "G":
        link(1, 2, -3, -1)
    return tuple(tuple(row) for row in a)


@dataclass(frozen=True)
class CartanMatrix:
    """Symmetrizable generalized Cartan matrix of finite type"""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvalidInputError("Cartan matrix must be square")
            if row[i] != 2:
                raise InvalidInputError(f"diagonal entry a_{i + 1}{i + 1} must equal 2")
            for j, value in enumerate(row):
                if i == j:
                    continue
                if value > 0:
                    raise InvalidInputError(f"off-diagonal entry a_{i + 1}{j + 1} is positive")
                if (value == 0) != (rows[j][i] == 0):
                    raise InvalidInputError(f"a_{i + 1}{j + 1} and a_{j + 1}{i + 1} disagree on vanishing")
        self.symmetrizer()

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "CartanMatrix":
        return CartanMatrix(tuple(zip(*self.entries)))

    def neighbours(self, i: int) -> List[int]:
        return [j for j in range(self.size) if j != i and self.entries[i][j] != 0]

    def symmetrizer(self) -> Tuple[Rational, ...]:
        """Positive d_i with d_i a_ij = d_j a_ji, smallest value 1 on each component"""
        n = self.size
        d: List[Optional[Rational]] = [None] * n
        for start in range(n):
            if d[start] is not None:
                continue
            d[start] = Rational(1)
            component = [start]
            stack = [start]
            while stack:
                i = stack.pop()
                for j in self.neighbours(i):
                    value = d[i] * self.entries[i][j] / self.entries[j][i]
                    if d[j] is None:
                        d[j] = value
                        component.append(j)
                        stack.append(j)
                    elif d[j] != value:
                        raise InvalidInputError("Cartan matrix is not symmetrizable")
            low = min(d[k] for k in component)
            for k in component:
                d[k] = d[k] / low
        return tuple(d)

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@lru_cache(maxsize=None)
def label_form(entries: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[Rational, ...], ...]:
    """Gram matrix of the invariant form in Dynkin-label coordinates

    With d the symmetrizer, (mu, nu) = m_mu^T D A^{-1} m_nu and
    (alpha_i, alpha_i) = 2 d_i.
    """
    cartan = CartanMatrix(entries)
    d = cartan.symmetrizer()
    inverse = Matrix(entries).inv()
    n = cartan.size
    return tuple(tuple(Rational(d[i] * inverse[i, j]) for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def positive_root_coords(entries: Tuple[Tuple[int, ...], ...]) -> Tuple[Tuple[int, ...], ...]:
    """Positive roots in simple-root coordinates, by height then lexicographically

    Closure from the simple roots using root strings: beta + alpha_i is a root
    iff q > 0 where q = p - <beta, alpha_i^vee> and p is the length of the
    alpha_i-string below beta.
    """
    n = len(entries)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    known = set(simple)
    layer = list(simple)
    ordered = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                pairing = sum(beta[j] * entries[i][j] for j in range(n))
                p = 0
                lower = list(beta)
                while True:
                    lower[i] -= 1
                    if tuple(lower) in known:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    gamma = tuple(beta[j] + (1 if j == i else 0) for j in range(n))
                    if gamma not in known:
                        known.add(gamma)
                        nxt.append(gamma)
        nxt.sort(key=lambda r: tuple(-x for x in r))
        ordered.extend(nxt)
        layer = nxt
    return tuple(sorted(ordered, key=lambda r: (sum(r), tuple(-x for x in r))))


def _match_nodes(entries, target) -> Optional[Tuple[int, ...]]:
    """Backtracking search for p with entries[k][m] == target[p[k]][p[m]]"""
    n = len(entries)
    assignment: List[int] = []
    used = set()

    def extend() -> bool:
        k = len(assignment)
        if k == n:
            return True
        for candidate in range(n):
            if candidate in used:
                continue
            ok = all(
                entries[k][m] == target[candidate][assignment[m]]
                and entries[m][k] == target[assignment[m]][candidate]
                for m in range(k)
            )
            if not ok:
                continue
            assignment.append(candidate)
            used.add(candidate)
            if extend():
                return True
            assignment.pop()
            used.discard(candidate)
        return False

    if extend():
        return tuple(assignment)
    return None


def _candidates(rank: int) -> List[Tuple[str, int]]:
    out = []
    for series in SERIES:
        try:
            _check_type(series, rank)
        except InvalidInputError:
            continue
        out.append((series, rank))
    return out


def identify_cartan_type(entries) -> Tuple[str, int, Tuple[int, ...]]:
    """(series, rank, node_map) with node_map[k] the Bourbaki node of row k"""
    entries = tuple(tuple(int(x) for x in row) for row in entries)
    rank = len(entries)
    candidates = _candidates(rank)
    identity = tuple(range(rank))
    for series, r in candidates:
        if cartan_entries(series, r) == entries:
            return series, r, identity
    for series, r in candidates:
        mapping = _match_nodes(entries, cartan_entries(series, r))
        if mapping is not None:
            return series, r, mapping
    raise InvalidInputError("Cartan matrix is not of a connected finite type", cartan=[list(r) for r in entries])


# ============================================
# Root data and weights
# ============================================
@dataclass(frozen=True)
class RootDatum:
    """(X, X^vee, alpha_i, alpha_i^vee) with explicit lattice bases"""

    series: str
    rank: int
    isogeny: str
    cartan: CartanMatrix
    roots: Tuple[Tuple[int, ...], ...]
    coroots: Tuple[Tuple[int, ...], ...]
    pairing: Tuple[Tuple[int, ...], ...]
    node_map: Tuple[int, ...] = field(default=(), compare=False)
    origin: Optional[object] = field(default=None, compare=False, hash=False, repr=False)

    @property
    def lattice_rank(self) -> int:
        return len(self.pairing)

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    def pair(self, x: Sequence, y: Sequence) -> Rational:
        total = Rational(0)
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            row = self.pairing[a]
            for b, yb in enumerate(y):
                if yb:
                    total += Rational(xa) * row[b] * yb
        return total

    @cached_property
    def _label_matrix(self) -> Matrix:
        """M[a, i] = <e_a, alpha_i^vee>; labels(x) = x M"""
        r = self.lattice_rank
        return Matrix(r, self.rank, lambda a, i: self.pair([int(a == b) for b in range(r)], self.coroots[i]))

    @cached_property
    def _label_inverse(self) -> Matrix:
        return self._label_matrix.inv()

    def labels(self, coords: Sequence) -> Tuple[Rational, ...]:
        row = Matrix([list(coords)])
        return tuple(Rational(v) for v in (row * self._label_matrix))

    def coords_from_labels(self, labels: Sequence, allow_rational: bool = False) -> Tuple[Rational, ...]:
        if len(labels) != self.rank:
            raise InvalidInputError(f"expected {self.rank} Dynkin labels, got {len(labels)}")
        row = Matrix([[Rational(v) for v in labels]]) * self._label_inverse
        coords = tuple(Rational(v) for v in row)
        if not allow_rational and any(c.q != 1 for c in coords):
            raise InvalidInputError(
                "weight does not lie in the lattice of this datum",
                labels=[str(v) for v in labels],
                isogeny=self.isogeny,
            )
        return coords

    def weight(self, coords: Sequence) -> "Weight":
        if len(coords) != self.lattice_rank:
            raise InvalidInputError(f"expected {self.lattice_rank} lattice coordinates")
        return Weight(tuple(Rational(c) for c in coords), self)

    def weight_from_labels(self, labels: Sequence, allow_rational: bool = False) -> "Weight":
        return Weight(self.coords_from_labels(labels, allow_rational), self)

    def zero(self) -> "Weight":
        return self.weight([0] * self.lattice_rank)

    def simple_root(self, i: int) -> "Weight":
        return self.weight(self.roots[i])

    def fundamental_weight(self, i: int) -> "Weight":
        return self.weight_from_labels([int(i == j) for j in range(self.rank)], allow_rational=True)

    def recovered_cartan(self) -> Tuple[Tuple[int, ...], ...]:
        """a_ji = <alpha_i, alpha_j^vee> read off the pairing"""
        n = self.rank
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                out[j][i] = int(self.pair(self.roots[i], self.coroots[j]))
        return tuple(tuple(r) for r in out)

    def check(self) -> "RootDatum":
        if self.recovered_cartan() != self.cartan.entries:
            raise ComputationError(
                "pairing does not reproduce the Cartan matrix",
                cartan=self.cartan.to_list(),
                recovered=[list(r) for r in self.recovered_cartan()],
            )
        return self

    def dual(self) -> "RootDatum":
        transposed = self.cartan.transpose()
        series, rank, node_map = identify_cartan_type(transposed.entries)
        swap = {SIMPLY_CONNECTED: ADJOINT, ADJOINT: SIMPLY_CONNECTED}
        origin = self.origin.dual() if self.origin is not None else None
        return RootDatum(
            series=series,
            rank=rank,
            isogeny=swap.get(self.isogeny, self.isogeny),
            cartan=transposed,
            roots=self.coroots,
            coroots=self.roots,
            pairing=tuple(zip(*self.pairing)),
            node_map=node_map,
            origin=origin,
        )

    @classmethod
    def from_cartan(cls, entries, isogeny: str = SIMPLY_CONNECTED) -> "RootDatum":
        """Datum with the given Cartan matrix in its own node order"""
        isogeny = normalize_isogeny(isogeny)
        cartan = CartanMatrix(entries)
        series, rank, node_map = identify_cartan_type(cartan.entries)
        n = cartan.size
        identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        if isogeny == SIMPLY_CONNECTED:
            roots = tuple(tuple(cartan.entries[k][i] for k in range(n)) for i in range(n))
            coroots = identity
        elif isogeny == ADJOINT:
            roots = identity
            coroots = cartan.entries
        else:
            raise InvalidInputError("explicit data support simply_connected and adjoint lattices only")
        return cls(series, rank, isogeny, cartan, roots, coroots, identity, node_map).check()

    def to_dict(self, weights: Iterable["Weight"] = ()) -> Dict:
        payload = {
            "series": self.series,
            "rank": self.rank,
            "isogeny": self.isogeny,
            "cartan": self.cartan.to_list(),
            "weights": [w.to_dict() for w in weights],
            "lattice": {
                "roots": [list(r) for r in self.roots],
                "coroots": [list(r) for r in self.coroots],
                "pairing": [list(r) for r in self.pairing],
            },
        }
        if self.node_map and self.node_map != tuple(range(self.rank)):
            payload["node_map"] = [k + 1 for k in self.node_map]
        return payload


@dataclass(frozen=True)
class Weight:
    """Element of X (coordinates in the lattice basis of its datum)"""

    coords: Tuple[Rational, ...]
    datum: RootDatum = field(compare=False, hash=False, repr=False)

    @cached_property
    def labels(self) -> Tuple[Rational, ...]:
        return self.datum.labels(self.coords)

    @property
    def is_integral(self) -> bool:
        return all(Rational(c).q == 1 for c in self.coords)

    def is_dominant(self) -> bool:
        return all(v >= 0 for v in self.labels)

    def int_labels(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.labels)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)), self.datum)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)), self.datum)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords), self.datum)

    def scale(self, factor) -> "Weight":
        return Weight(tuple(Rational(factor) * a for a in self.coords), self.datum)

    def to_dict(self) -> Dict:
        return {"coords": list(self.coords), "labels": list(self.labels)}


def build_root_datum(series: str, rank: int, isogeny: str = SIMPLY_CONNECTED) -> RootDatum:
    """Datum of the simply connected or adjoint group of the given type"""
    series = str(series).strip().upper()
    rank = int(rank)
    isogeny = normalize_isogeny(isogeny)
    if isogeny == OTHER:
        raise InvalidInputError("build_root_datum accepts simply_connected or adjoint", isogeny=isogeny)
    entries = cartan_entries(series, rank)
    datum = RootDatum.from_cartan(entries, isogeny)
    logger.debug(f"Built root datum {series}{rank} ({isogeny})")
    return datum


# ============================================
# Roots and the Weyl group
# ============================================
def positive_roots(datum: RootDatum) -> Tuple[Weight, ...]:
    """Positive roots as weights, ordered by height"""
    out = []
    for c in positive_root_coords(datum.cartan.entries):
        coords = [0] * datum.lattice_rank
        for i, ci in enumerate(c):
            if ci:
                for a, v in enumerate(datum.roots[i]):
                    coords[a] += ci * v
        out.append(datum.weight(coords))
    return tuple(out)


def dim_borel(datum: RootDatum) -> int:
    return len(positive_root_coords(datum.cartan.entries)) + datum.rank


def reflect(weight: Weight, i: int) -> Weight:
    """s_i(mu) = mu - <mu, alpha_i^vee> alpha_i"""
    datum = weight.datum
    k = weight.labels[i]
    return Weight(tuple(c - k * r for c, r in zip(weight.coords, datum.roots[i])), datum)


def weyl_orbit_dominant_rep(weight: Weight) -> Weight:
    """Unique dominant weight in the Weyl orbit, via simple reflections"""
    current = weight
    while True:
        labels = current.labels
        negative = [i for i, v in enumerate(labels) if v < 0]
        if not negative:
            return current
        current = reflect(current, negative[0])


def weyl_vector(datum: RootDatum) -> Weight:
    """rho = sum of fundamental weights (rational coordinates if rho is not in X)"""
    return datum.weight_from_labels([1] * datum.rank, allow_rational=True)


def coweyl_vector(datum: RootDatum) -> Weight:
    """rho^vee, as a weight of the Langlands dual datum"""
    return weyl_vector(datum.dual())


def half_sum_positive_roots(datum: RootDatum) -> Weight:
    total = datum.zero()
    for root in positive_roots(datum):
        total = total + root
    return total.scale(Rational(1, 2))


# ============================================
# Type A partition coordinates
# ============================================
def weight_from_parts(datum: RootDatum, parts: Sequence[int]) -> Weight:
    """GL-style coordinates (a_1, ..., a_n) -> weight of A_{n-1}, modulo all-ones"""
    if datum.series != "A":
        raise InvalidInputError("partition coordinates are defined for type A only")
    n = datum.rank + 1
    if len(parts) > n:
        raise InvalidInputError(f"at most {n} parts allowed", parts=list(parts))
    padded = list(parts) + [0] * (n - len(parts))
    labels = [padded[i] - padded[i + 1] for i in range(n - 1)]
    return datum.weight_from_labels(labels)


def parts_of_weight(weight: Weight) -> Tuple[int, ...]:
    """Inverse of weight_from_parts, normalized so the last part is 0"""
    if weight.datum.series != "A":
        raise InvalidInputError("partition coordinates are defined for type A only")
    labels = weight.labels
    n = len(labels) + 1
    parts = [0] * n
    for i in range(n - 2, -1, -1):
        parts[i] = parts[i + 1] + labels[i]
    return tuple(int(p) for p in parts)


__all__ = [
    "SERIES",
    "SIMPLY_CONNECTED",
    "ADJOINT",
    "OTHER",
    "ISOGENIES",
    "normalize_isogeny",
    "cartan_entries",
    "CartanMatrix",
    "label_form",
    "positive_root_coords",
    "identify_cartan_type",
    "RootDatum",
    "Weight",
    "build_root_datum",
    "positive_roots",
    "dim_borel",
    "reflect",
    "weyl_orbit_dominant_rep",
    "weyl_vector",
    "coweyl_vector",
    "half_sum_positive_roots",
    "weight_from_parts",
    "parts_of_weight",
]
