"""
Exact rational linear algebra helpers over sympy's DomainMatrix/QQ.

Vectors are plain lists of sympy Rationals; matrices are lists of rows or
sparse DomainMatrix objects over QQ. Nothing here ever touches floats.
"""

from typing import List, Optional, Sequence, Tuple

from sympy import Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

Vector = List[Rational]


def qq(value):
    if QQ.of_type(value):
        return value
    return QQ.convert(Rational(value))


def to_rational(value) -> Rational:
    if QQ.of_type(value):
        return QQ.to_sympy(value)
    return Rational(value)


def dm(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    """Build a sparse DomainMatrix over QQ from a list of rows"""
    rows = [list(r) for r in rows]
    width = (len(rows[0]) if rows else 0) if ncols is None else ncols
    entries = {}
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            if value != 0:
                entries.setdefault(i, {})[j] = qq(value)
    return DomainMatrix(entries, (len(rows), width), QQ)


def sparse(entries: dict, shape: Tuple[int, int]) -> DomainMatrix:
    """Build a sparse DomainMatrix from {(i, j): value}"""
    rows: dict = {}
    for (i, j), v in entries.items():
        if v == 0:
            continue
        rows.setdefault(i, {})[j] = qq(v)
    return DomainMatrix(rows, shape, QQ)


def eye(n: int) -> DomainMatrix:
    return sparse({(i, i): 1 for i in range(n)}, (n, n))


def zeros(m: int, n: int) -> DomainMatrix:
    return DomainMatrix({}, (m, n), QQ)


def rows_of(matrix: DomainMatrix) -> List[Vector]:
    """DomainMatrix -> list of rows of sympy Rationals"""
    m, n = matrix.shape
    out = [[Rational(0)] * n for _ in range(m)]
    for i, row in matrix.to_sparse().to_dod().items():
        for j, value in row.items():
            out[i][j] = to_rational(value)
    return out


def entries_of(matrix: DomainMatrix) -> dict:
    """Nonzero entries {(i, j): Rational}"""
    out = {}
    for i, row in matrix.to_sparse().to_dod().items():
        for j, value in row.items():
            out[(i, j)] = to_rational(value)
    return out


def column(matrix: DomainMatrix, j: int) -> Vector:
    m, _ = matrix.shape
    out = [Rational(0)] * m
    for (i, jj), value in entries_of(matrix).items():
        if jj == j:
            out[i] = value
    return out


def columns_matrix(vectors: Sequence[Vector], length: int) -> DomainMatrix:
    """Stack vectors as the columns of a matrix"""
    entries = {}
    for j, v in enumerate(vectors):
        for i, value in enumerate(v):
            entries[(i, j)] = value
    return sparse(entries, (length, len(vectors)))


def rank(rows) -> int:
    matrix = rows if isinstance(rows, DomainMatrix) else dm(rows)
    if 0 in matrix.shape:
        return 0
    return matrix.to_dense().rank()


def rref(rows) -> Tuple[List[Vector], Tuple[int, ...]]:
    matrix = rows if isinstance(rows, DomainMatrix) else dm(rows)
    if 0 in matrix.shape:
        return [], ()
    reduced, pivots = matrix.to_dense().rref()
    return rows_of(reduced), tuple(pivots)


def nullspace(rows, ncols: Optional[int] = None) -> List[Vector]:
    """Basis (list of vectors) of {x : A x = 0}"""
    matrix = rows if isinstance(rows, DomainMatrix) else dm(rows, ncols)
    m, n = matrix.shape
    if n == 0:
        return []
    if m == 0 or matrix.is_zero_matrix:
        return [[Rational(int(i == j)) for j in range(n)] for i in range(n)]
    reduced, pivots = rref(matrix)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vector = [Rational(0)] * n
        vector[f] = Rational(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r][f]
        basis.append(vector)
    return basis


def solve(rows, rhs: Sequence) -> Optional[Vector]:
    """One solution of A x = b, or None when the system is inconsistent"""
    matrix = rows if isinstance(rows, DomainMatrix) else dm(rows)
    m, n = matrix.shape
    if m == 0:
        return [Rational(0)] * n
    augmented = dm([row + [b] for row, b in zip(rows_of(matrix), rhs)], n + 1)
    reduced, pivots = rref(augmented)
    if n in pivots:
        return None
    x = [Rational(0)] * n
    for r, p in enumerate(pivots):
        x[p] = reduced[r][n]
    return x


def independent_columns(rows) -> Tuple[int, ...]:
    """Indices of a maximal independent set of columns (first-come)"""
    _, pivots = rref(rows)
    return pivots


def in_span(vectors: Sequence[Vector], target: Vector) -> Optional[Vector]:
    """Coefficients c with sum c_k v_k = target, or None"""
    if not vectors:
        return [] if all(x == 0 for x in target) else None
    return solve(columns_matrix(vectors, len(target)), target)


def inverse(rows) -> DomainMatrix:
    matrix = rows if isinstance(rows, DomainMatrix) else dm(rows)
    return matrix.to_dense().inv().to_sparse()


def apply(matrix: DomainMatrix, vector: Sequence) -> Vector:
    """Matrix times column vector"""
    col = dm([[v] for v in vector], 1)
    return column(matrix.to_sparse() * col, 0)


def dot(u: Sequence, v: Sequence) -> Rational:
    return sum((Rational(a) * Rational(b) for a, b in zip(u, v)), Rational(0))


def same(a: DomainMatrix, b: DomainMatrix) -> bool:
    """Exact equality regardless of dense/sparse storage"""
    return a.shape == b.shape and entries_of(a) == entries_of(b)


def commutator(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    a, b = a.to_sparse(), b.to_sparse()
    return a * b - b * a


def scaled(matrix: DomainMatrix, factor) -> DomainMatrix:
    return matrix.to_sparse() * qq(factor)


def restrict(operator: DomainMatrix, basis: DomainMatrix) -> DomainMatrix:
    """Matrix of an operator on the invariant subspace spanned by basis columns"""
    operator, basis = operator.to_sparse(), basis.to_sparse()
    image = operator * basis
    left = basis.transpose() * basis
    coords = inverse(left) * (basis.transpose() * image)
    if not same(basis * coords, image):
        raise ValueError("subspace is not invariant under the operator")
    return coords


def charpoly(matrix: DomainMatrix) -> List[Rational]:
    """Characteristic polynomial coefficients, leading coefficient first"""
    if matrix.shape[0] == 0:
        return [Rational(1)]
    return [to_rational(c) for c in matrix.to_dense().charpoly()]


def trace(matrix: DomainMatrix) -> Rational:
    return sum((v for (i, j), v in entries_of(matrix).items() if i == j), Rational(0))


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """Absolute determinant of a square integer matrix (index of the sublattice)"""
    if not rows:
        return 1
    return abs(int(to_rational(dm(rows).to_dense().det())))


__all__ = [
    "Vector",
    "qq",
    "to_rational",
    "dm",
    "sparse",
    "eye",
    "zeros",
    "rows_of",
    "entries_of",
    "column",
    "columns_matrix",
    "rank",
    "rref",
    "nullspace",
    "solve",
    "independent_columns",
    "in_span",
    "inverse",
    "apply",
    "dot",
    "same",
    "commutator",
    "scaled",
    "restrict",
    "charpoly",
    "trace",
    "lattice_index",
]
