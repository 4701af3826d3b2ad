"""
Opers on the formal disc in a fixed coordinate t.

A connection is d/dt + A(t) with A(t) = sum_i psi_i(t) f_i + v(t), v valued
in b, stored as truncated power series. Gauge action of a group-valued
series g(t) is A -> g A g^{-1} - (dg/dt) g^{-1}. Reduction to the canonical
form first normalizes psi_i to 1 with a Cartan-valued gauge and then
clears [p_-1, g_{m+1}] from each degree m of v with exp(g_{m+1})-valued
gauges, leaving coefficients in V_can.

Coefficients are known modulo t^order; every nontrivial gauge step costs
one order because of the derivative term, and the loss is carried in the
series' order.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, factorial
from sympy.polys.matrices import DomainMatrix

from config.settings import TRUNCATION_ORDER, sample_bounds
from src.foldlab.errors import ComputationError, InvalidInputError
from src.foldlab.invariants import (
    chevalley_generators,
    principal_triple,
    section_point,
)
from src.foldlab.linalg import apply, columns_matrix, entries_of, eye, inverse, scaled, solve, sparse, zeros
from src.foldlab.realizations import MatrixRealization, folded_realization
from src.foldlab.serialization import parse_rational

logger = logging.getLogger(__name__)


# ============================================
# Truncated series
# ============================================
@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_{order-1} t^{order-1} + O(t^order)"""

    coefficients: Tuple[Rational, ...]
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise InvalidInputError("series order must be non-negative")
        values = [Rational(c) for c in self.coefficients][: self.order]
        values += [Rational(0)] * (self.order - len(values))
        object.__setattr__(self, "coefficients", tuple(values))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((), order)

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls((value,), order)

    def __getitem__(self, k: int) -> Rational:
        return self.coefficients[k] if k < self.order else Rational(0)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coefficients, min(order, self.order))

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        order = min(self.order, other.order)
        return TruncatedSeries(tuple(self[k] + other[k] for k in range(order)), order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = Rational(other)
            return TruncatedSeries(tuple(c * x for x in self.coefficients), self.order)
        order = min(self.order, other.order)
        out = [Rational(0)] * order
        for i in range(order):
            if self[i]:
                for j in range(order - i):
                    out[i + j] += self[i] * other[j]
        return TruncatedSeries(tuple(out), order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        out = TruncatedSeries.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return self
        return TruncatedSeries(tuple(k * self[k] for k in range(1, self.order)), self.order - 1)

    def inverse(self) -> "TruncatedSeries":
        if self[0] == 0:
            raise InvalidInputError("series with zero constant term is not invertible")
        out = [Rational(1) / self[0]]
        for k in range(1, self.order):
            total = sum((self[j] * out[k - j] for j in range(1, k + 1)), Rational(0))
            out.append(-total / self[0])
        return TruncatedSeries(tuple(out), self.order)

    def evaluate(self, t) -> Rational:
        t = Rational(t)
        return sum((c * t**k for k, c in enumerate(self.coefficients)), Rational(0))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_one(self) -> bool:
        return self[0] == 1 and not any(self.coefficients[1:])

    def agrees(self, other: "TruncatedSeries", order: Optional[int] = None) -> bool:
        """Equality modulo t^order (default: the common precision)"""
        order = min(self.order, other.order) if order is None else order
        return all(self[k] == other[k] for k in range(order))

    def to_dict(self) -> Dict:
        return {"order": self.order, "coefficients": list(self.coefficients)}

    @classmethod
    def parse(cls, values, order: int) -> "TruncatedSeries":
        if isinstance(values, dict):
            order = min(order, int(values.get("order", order)))
            values = values.get("coefficients", [])
        return cls(tuple(parse_rational(v) for v in values), order)


@dataclass(frozen=True, eq=False)
class MatrixSeries:
    """Matrix-valued truncated series with DomainMatrix coefficients"""

    coefficients: Tuple[DomainMatrix, ...]
    order: int
    size: int

    @classmethod
    def zero(cls, size: int, order: int) -> "MatrixSeries":
        return cls(tuple(zeros(size, size) for _ in range(order)), order, size)

    @classmethod
    def identity(cls, size: int, order: int) -> "MatrixSeries":
        return cls.constant(eye(size), order)

    @classmethod
    def constant(cls, matrix: DomainMatrix, order: int) -> "MatrixSeries":
        size = matrix.shape[0]
        return cls(tuple([matrix.to_sparse()] + [zeros(size, size) for _ in range(order - 1)])[:order], order, size)

    @classmethod
    def from_scalar(cls, series: TruncatedSeries, matrix: DomainMatrix) -> "MatrixSeries":
        return cls(tuple(scaled(matrix, c) for c in series.coefficients), series.order, matrix.shape[0])

    def coefficient(self, k: int) -> DomainMatrix:
        return self.coefficients[k] if k < self.order else zeros(self.size, self.size)

    def truncate(self, order: int) -> "MatrixSeries":
        order = min(order, self.order)
        return MatrixSeries(self.coefficients[:order], order, self.size)

    def __add__(self, other: "MatrixSeries") -> "MatrixSeries":
        order = min(self.order, other.order)
        return MatrixSeries(tuple(self.coefficient(k) + other.coefficient(k) for k in range(order)), order, self.size)

    def __neg__(self) -> "MatrixSeries":
        return MatrixSeries(tuple(scaled(c, -1) for c in self.coefficients), self.order, self.size)

    def __sub__(self, other: "MatrixSeries") -> "MatrixSeries":
        return self + (-other)

    def __mul__(self, other: "MatrixSeries") -> "MatrixSeries":
        order = min(self.order, other.order)
        out = [zeros(self.size, self.size) for _ in range(order)]
        for i in range(order):
            a = self.coefficient(i)
            if a.is_zero_matrix:
                continue
            for j in range(order - i):
                b = other.coefficient(j)
                if not b.is_zero_matrix:
                    out[i + j] = out[i + j] + a * b
        return MatrixSeries(tuple(out), order, self.size)

    def derivative(self) -> "MatrixSeries":
        if self.order == 0:
            return self
        return MatrixSeries(
            tuple(scaled(self.coefficient(k), k) for k in range(1, self.order)), self.order - 1, self.size
        )

    def inverse(self) -> "MatrixSeries":
        head = inverse(self.coefficient(0))
        out = [head]
        for k in range(1, self.order):
            total = zeros(self.size, self.size)
            for j in range(1, k + 1):
                total = total + self.coefficient(j) * out[k - j]
            out.append(scaled(head * total, -1))
        return MatrixSeries(tuple(out), self.order, self.size)

    def exp(self) -> "MatrixSeries":
        """exp of a nilpotent-valued series"""
        result = MatrixSeries.identity(self.size, self.order)
        power = result
        k = 0
        while True:
            k += 1
            power = power * self
            if all(c.is_zero_matrix for c in power.coefficients):
                break
            if k > self.size * max(self.order, 1):
                raise ComputationError("matrix series is not nilpotent")
            result = result + MatrixSeries(
                tuple(scaled(c, 1 / factorial(k)) for c in power.coefficients), power.order, self.size
            )
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero_matrix for c in self.coefficients)

    def agrees(self, other: "MatrixSeries", order: Optional[int] = None) -> bool:
        order = min(self.order, other.order) if order is None else order
        return all(entries_of(self.coefficient(k)) == entries_of(other.coefficient(k)) for k in range(order))


def apply_gauge(a: MatrixSeries, g: MatrixSeries, g_inv: Optional[MatrixSeries] = None) -> MatrixSeries:
    """g A g^{-1} - (dg/dt) g^{-1}"""
    g_inv = g.inverse() if g_inv is None else g_inv
    return g * a * g_inv - g.derivative() * g_inv


# ============================================
# Connections
# ============================================
@lru_cache(maxsize=None)
def _simple_negative(name: str, g: MatrixRealization) -> Tuple[Tuple[int, Rational], ...]:
    """For each f_i the basis index it is a multiple of, and the multiple"""
    out = []
    for f in g.f:
        support = [(b, c) for b, c in enumerate(g.coordinates(f)) if c]
        if len(support) != 1:
            raise ComputationError(f"{name}: f_i is not proportional to a basis element")
        out.append(support[0])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class OperConnection:
    """d/dt + t^{-k} (sum_i psi_i(t) f_i + v(t)), v in b"""

    algebra: MatrixRealization = field(repr=False)
    psi: Tuple[TruncatedSeries, ...]
    v: Tuple[TruncatedSeries, ...]
    pole_order: int = 0

    @property
    def order(self) -> int:
        return min(s.order for s in self.psi + self.v)

    def validate(self) -> "OperConnection":
        g = self.algebra
        if len(self.psi) != g.rank:
            raise InvalidInputError(f"expected {g.rank} psi series", received=len(self.psi))
        if len(self.v) != len(g.borel_indices):
            raise InvalidInputError(f"expected {len(g.borel_indices)} b-coordinates", received=len(self.v))
        zero = [i + 1 for i, s in enumerate(self.psi) if s[0] == 0]
        if zero:
            raise InvalidInputError("psi_i(0) = 0: not an oper", nodes=zero)
        if self.pole_order < 0:
            raise InvalidInputError("pole order must be non-negative")
        return self

    def matrix(self) -> MatrixSeries:
        g = self.algebra
        out = MatrixSeries.zero(g.n, self.order)
        for s, f in zip(self.psi, g.f):
            if not s.is_zero():
                out = out + MatrixSeries.from_scalar(s, f)
        for s, b in zip(self.v, g.borel_indices):
            if not s.is_zero():
                out = out + MatrixSeries.from_scalar(s, g.basis[b])
        return out

    @classmethod
    def from_matrix(cls, g: MatrixRealization, a: MatrixSeries, pole_order: int = 0) -> "OperConnection":
        simple = _simple_negative(g.name, g)
        simple_index = {b: i for i, (b, _) in enumerate(simple)}
        psi = [[Rational(0)] * a.order for _ in range(g.rank)]
        v = [[Rational(0)] * a.order for _ in g.borel_indices]
        for k in range(a.order):
            coords = g.coordinates(a.coefficient(k))
            for b, c in enumerate(coords):
                if not c:
                    continue
                if b in simple_index:
                    i = simple_index[b]
                    psi[i][k] = c / simple[i][1]
                elif b < len(v):
                    v[b][k] = c
                else:
                    raise InvalidInputError("connection has components below the simple negative roots", basis=g.labels[b])
        return cls(
            algebra=g,
            psi=tuple(TruncatedSeries(tuple(p), a.order) for p in psi),
            v=tuple(TruncatedSeries(tuple(x), a.order) for x in v),
            pole_order=pole_order,
        )

    def agrees(self, other: "OperConnection") -> bool:
        return all(x.agrees(y) for x, y in zip(self.psi + self.v, other.psi + other.v))

    def to_dict(self) -> Dict:
        g = self.algebra
        return {
            "algebra": g.name,
            "order": self.order,
            "pole_order": self.pole_order,
            "psi": [list(s.coefficients) for s in self.psi],
            "v": {g.labels[b]: list(s.coefficients) for s, b in zip(self.v, g.borel_indices) if not s.is_zero()},
        }


def parse_connection(g: MatrixRealization, payload: Dict, order: Optional[int] = None) -> OperConnection:
    """Connection from {"psi": [[...], ...], "v": {label: [...]}, "pole_order": k}"""
    order = int(payload.get("order", order or TRUNCATION_ORDER))
    psi_values = payload.get("psi")
    if psi_values is None:
        psi = tuple(TruncatedSeries.constant(1, order) for _ in range(g.rank))
    else:
        psi = tuple(TruncatedSeries.parse(p, order) for p in psi_values)
    v_values = payload.get("v", {})
    index = {label: b for b, label in enumerate(g.labels)}
    v = [TruncatedSeries.zero(order) for _ in g.borel_indices]
    if isinstance(v_values, dict):
        for label, values in v_values.items():
            if label not in index or index[label] >= len(v):
                raise InvalidInputError(f"'{label}' is not a Borel basis element of {g.name}", basis=list(g.labels[: len(v)]))
            v[index[label]] = TruncatedSeries.parse(values, order)
    else:
        for b, values in enumerate(v_values):
            v[b] = TruncatedSeries.parse(values, order)
    return OperConnection(g, psi, tuple(v), int(payload.get("pole_order", 0))).validate()


def random_connection(g: MatrixRealization, rng: random.Random, order: int = TRUNCATION_ORDER) -> OperConnection:
    low, high = sample_bounds()

    def series(nonzero_head: bool = False) -> TruncatedSeries:
        values = [rng.randint(low, high) for _ in range(order)]
        if nonzero_head and values[0] == 0:
            values[0] = 1
        return TruncatedSeries(tuple(values), order)

    psi = tuple(series(nonzero_head=True) for _ in range(g.rank))
    v = tuple(series() for _ in g.borel_indices)
    return OperConnection(g, psi, v).validate()


def gauge_transform(c: OperConnection, x: MatrixSeries) -> OperConnection:
    """Gauge by exp(x) for an n-valued series x"""
    a = apply_gauge(c.matrix(), x.exp(), (-x).exp())
    return OperConnection.from_matrix(c.algebra, a, c.pole_order)


def n_series(g: MatrixRealization, coords: Dict[str, TruncatedSeries], order: int) -> MatrixSeries:
    """Series valued in n from {positive basis label: series}"""
    index = {label: b for b, label in enumerate(g.labels)}
    out = MatrixSeries.zero(g.n, order)
    for label, s in coords.items():
        b = index.get(label)
        if b is None or b not in g.positive_indices:
            raise InvalidInputError(f"'{label}' is not a positive root vector of {g.name}")
        out = out + MatrixSeries.from_scalar(s, g.basis[b])
    return out


def random_gauge(g: MatrixRealization, rng: random.Random, order: int = TRUNCATION_ORDER) -> MatrixSeries:
    """n-valued series with small integer coefficients, for exp-gauging"""
    coords = {}
    for b in g.positive_indices:
        coords[g.labels[b]] = TruncatedSeries(tuple(rng.randint(-3, 3) for _ in range(order)), order)
    return n_series(g, coords, order)


# ============================================
# Canonical form
# ============================================
@dataclass(frozen=True, eq=False)
class CanonicalOper:
    """d/dt + p_-1 + sum_k u_k(t) v_k with v_k the graded V_can basis"""

    algebra: MatrixRealization = field(repr=False)
    coefficients: Tuple[TruncatedSeries, ...]

    @property
    def order(self) -> int:
        return min((s.order for s in self.coefficients), default=TRUNCATION_ORDER)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return principal_triple(self.algebra).exponents

    def vector(self, k: int) -> List[Rational]:
        """V_can element at t^k in coordinates of the realization"""
        section = principal_triple(self.algebra)
        out = [Rational(0)] * self.algebra.dim
        for s, v in zip(self.coefficients, section.slodowy_basis):
            if s[k]:
                for a, x in enumerate(v):
                    out[a] += s[k] * x
        return out

    def to_connection(self) -> OperConnection:
        g = self.algebra
        order = self.order
        psi = tuple(TruncatedSeries.constant(1, order) for _ in range(g.rank))
        v = [[Rational(0)] * order for _ in g.borel_indices]
        for k in range(order):
            for b, x in enumerate(self.vector(k)):
                if x:
                    v[b][k] = x
        return OperConnection(g, psi, tuple(TruncatedSeries(tuple(x), order) for x in v))

    def agrees(self, other: "CanonicalOper") -> bool:
        return all(x.agrees(y) for x, y in zip(self.coefficients, other.coefficients))

    def truncate(self, order: int) -> "CanonicalOper":
        return CanonicalOper(self.algebra, tuple(s.truncate(order) for s in self.coefficients))

    def to_dict(self) -> Dict:
        return {
            "algebra": self.algebra.name,
            "order": self.order,
            "coefficients": [
                {"degree": d, "series": list(s.coefficients)} for d, s in zip(self.degrees, self.coefficients)
            ],
        }


@lru_cache(maxsize=None)
def _splittings(name: str, g: MatrixRealization) -> Dict[int, Tuple[Tuple[int, ...], Tuple[int, ...], DomainMatrix, Tuple[int, ...]]]:
    """g_m = [p_-1, g_{m+1}] + (V_can)_m for each m >= 0, as an inverted square system"""
    section = principal_triple(g)
    out = {}
    for m in range(0, g.max_degree + 1):
        rows = tuple(g.graded_indices(m))
        upper = tuple(g.graded_indices(m + 1))
        vcan = tuple(k for k, (d, _) in enumerate(section.vcan) if d == m)
        columns = []
        for b in upper:
            image = g.bracket_coords(section.p_minus1, [int(a == b) for a in range(g.dim)])
            columns.append([image[r] for r in rows])
        for k in vcan:
            columns.append([section.vcan[k][1][r] for r in rows])
        if len(columns) != len(rows):
            raise ComputationError(f"{name}: degree {m} does not split", rows=len(rows), columns=len(columns))
        out[m] = (rows, upper, inverse(columns_matrix(columns, len(rows))), vcan)
    return out


def _split_component(g: MatrixRealization, m: int, coords: Sequence) -> Tuple[List[Rational], List[Rational]]:
    rows, upper, inv, vcan = _splittings(g.name, g)[m]
    solution = apply(inv, [coords[r] for r in rows])
    return solution[: len(upper)], solution[len(upper):]


def _normalize_psi(c: OperConnection, a: MatrixSeries) -> MatrixSeries:
    """Cartan gauge D with Ad_D(psi_i f_i) = f_i"""
    g = c.algebra
    if all(s.is_one() for s in c.psi):
        return a
    order = a.order
    node = {}
    for i, f in enumerate(g.f):
        for (p, q) in entries_of(f):
            if p != q + 1:
                raise ComputationError(f"{g.name}: f_{i + 1} is not subdiagonal")
            node[q] = i
    d = [TruncatedSeries.constant(1, order)]
    for q in range(g.n - 1):
        if q not in node:
            raise ComputationError(f"{g.name}: p_-1 is not principal")
        d.append(d[-1] * c.psi[node[q]].inverse())
    d_inv = [s.inverse() for s in d]
    log_derivative = [s.derivative() * si for s, si in zip(d, d_inv)]
    mean = sum(log_derivative, TruncatedSeries.zero(order - 1)) * Rational(1, g.n)

    def diagonal(values: Sequence[TruncatedSeries]) -> MatrixSeries:
        out = MatrixSeries.zero(g.n, min(s.order for s in values))
        for p, s in enumerate(values):
            out = out + MatrixSeries.from_scalar(s, sparse({(p, p): 1}, (g.n, g.n)))
        return out

    conjugated = diagonal(d) * a * diagonal(d_inv)
    return conjugated - diagonal([s - mean for s in log_derivative])


def gauge_reduce(c: OperConnection) -> CanonicalOper:
    """Canonical representative with coefficients in V_can"""
    c.validate()
    if c.pole_order != 0:
        raise InvalidInputError("gauge_reduce needs a regular connection (pole order 0)")
    g = c.algebra
    a = _normalize_psi(c, c.matrix())
    for m in range(0, g.max_degree + 1):
        rows, upper, _, _ = _splittings(g.name, g)[m]
        if not upper:
            continue
        steps = []
        for k in range(a.order):
            x, _ = _split_component(g, m, g.coordinates(a.coefficient(k)))
            matrix = zeros(g.n, g.n)
            for b, y in zip(upper, x):
                if y:
                    matrix = matrix + scaled(g.basis[b], y)
            steps.append(matrix)
        x_series = MatrixSeries(tuple(steps), a.order, g.n)
        if x_series.is_zero():
            continue
        a = apply_gauge(a, x_series.exp(), (-x_series).exp())
        logger.debug(f"Reduced degree {m} of {g.name} oper, order now {a.order}")

    section = principal_triple(g)
    u = [[Rational(0)] * a.order for _ in section.vcan]
    for k in range(a.order):
        coords = g.coordinates(a.coefficient(k))
        for m in range(0, g.max_degree + 1):
            x, z = _split_component(g, m, coords)
            if any(x):
                raise ComputationError("reduction left a non-canonical component", degree=m, t_power=k)
            _, _, _, vcan = _splittings(g.name, g)[m]
            for j, value in zip(vcan, z):
                u[j][k] = value
    return CanonicalOper(g, tuple(TruncatedSeries(tuple(s), a.order) for s in u))


def sl2_closed_form(c: OperConnection) -> TruncatedSeries:
    """u = b + a^2 + a' for d/dt + f + a h + b e on sl2"""
    g = c.algebra
    if g.name != "sl2" or not all(s.is_one() for s in c.psi):
        raise InvalidInputError("closed form applies to sl2 connections with psi = 1")
    a = c.v[g.labels.index("h1")]
    b = c.v[g.labels.index("E12")]
    return b + a * a + a.derivative()


# ============================================
# sigma action and fixed opers
# ============================================
def sigma_on_oper(c):
    """Apply sigma^{-1} coefficient-wise to an OperConnection or CanonicalOper"""
    if isinstance(c, CanonicalOper):
        g = c.algebra
        section = principal_triple(g)
        basis = [list(v) for v in section.slodowy_basis]
        images = []
        for v in basis:
            image = g.coordinates(g.sigma_inverse_matrix(g.element(v)))
            coeffs = solve(columns_matrix(basis, g.dim), image)
            if coeffs is None:
                raise ComputationError("sigma does not preserve V_can")
            images.append(coeffs)
        order = c.order
        out = [[Rational(0)] * order for _ in basis]
        for j, s in enumerate(c.coefficients):
            for k in range(order):
                if s[k]:
                    for i, y in enumerate(images[j]):
                        out[i][k] += s[k] * y
        return CanonicalOper(g, tuple(TruncatedSeries(tuple(x), order) for x in out))
    g = c.algebra
    a = c.matrix()
    image = MatrixSeries(tuple(g.sigma_inverse_matrix(m) for m in a.coefficients), a.order, a.size)
    return OperConnection.from_matrix(g, image, c.pole_order)


@dataclass(frozen=True)
class FixedOperMatch:
    ok: bool
    oper: Optional[CanonicalOper] = None
    degree: Optional[int] = None
    t_power: Optional[int] = None

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "oper": self.oper.to_dict() if self.oper is not None else None,
            "offending_degree": self.degree,
            "t_power": self.t_power,
        }


def fixed_oper_match(c: CanonicalOper) -> FixedOperMatch:
    """Read a sigma-fixed canonical oper of g as a canonical oper of g_sigma"""
    g = c.algebra
    h = folded_realization(g)
    section_g = principal_triple(g)
    section_h = principal_triple(h)
    basis_h = [list(v) for v in section_h.slodowy_basis]
    order = c.order
    out = [[Rational(0)] * order for _ in basis_h]
    for k in range(order):
        for m in sorted(set(section_g.exponents)):
            component = [Rational(0)] * g.dim
            for s, (d, v) in zip(c.coefficients, section_g.vcan):
                if d == m and s[k]:
                    for a, x in enumerate(v):
                        component[a] += s[k] * x
            if not any(component):
                continue
            matrix = g.element(component)
            if not (g.sigma_matrix(matrix) - matrix).is_zero_matrix or not h.contains(matrix):
                return FixedOperMatch(ok=False, degree=m, t_power=k)
            coeffs = solve(columns_matrix(basis_h, h.dim), h.coordinates(matrix))
            if coeffs is None:
                return FixedOperMatch(ok=False, degree=m, t_power=k)
            for i, y in enumerate(coeffs):
                out[i][k] += y
    oper = CanonicalOper(h, tuple(TruncatedSeries(tuple(x), order) for x in out))
    return FixedOperMatch(ok=True, oper=oper)


def extend_oper(c: CanonicalOper, g: MatrixRealization) -> CanonicalOper:
    """Canonical oper of g_sigma read as a (sigma-fixed) canonical oper of g"""
    h = c.algebra
    if folded_realization(g) is not h:
        raise InvalidInputError(f"{h.name} is not the folded realization of {g.name}")
    basis_g = [list(v) for v in principal_triple(g).slodowy_basis]
    order = c.order
    out = [[Rational(0)] * order for _ in basis_g]
    for k in range(order):
        vector = c.vector(k)
        if not any(vector):
            continue
        coeffs = solve(columns_matrix(basis_g, g.dim), g.coordinates(h.element(vector)))
        if coeffs is None:
            raise ComputationError("folded V_can element is not in V_can of the unfolded algebra")
        for i, y in enumerate(coeffs):
            out[i][k] += y
    return CanonicalOper(g, tuple(TruncatedSeries(tuple(x), order) for x in out))


# ============================================
# Residues
# ============================================
def residue(c: OperConnection) -> Dict:
    """Invariant values at sum_i psi_i(0) f_i + v(0)"""
    c.validate()
    if c.pole_order < 1:
        raise InvalidInputError("a connection without a pole has no residue")
    g = c.algebra
    point = [Rational(0)] * g.dim
    for (b, scale), s in zip(_simple_negative(g.name, g), c.psi):
        point[b] += s[0] * scale
    for b, s in zip(g.borel_indices, c.v):
        point[b] += s[0]
    values = [{"degree": p.degree, "value": p.evaluate(point)} for p in chevalley_generators(g)]
    return {"algebra": g.name, "pole_order": c.pole_order, "values": values}


def cartan_point(g: MatrixRealization, labels: Sequence) -> List[Rational]:
    """Element of h dual to the weight with the given labels under kappa"""
    y = Matrix(g.cartan_form).solve(Matrix([Rational(v) for v in labels]))
    return g.coordinates(g.cartan_element([Rational(v) for v in y]))


def lambda_residue(g: MatrixRealization, labels: Sequence, order: int = TRUNCATION_ORDER) -> Dict:
    """Synthesize t^{-1}(p_-1 + v) with residue pi(-lambda - rho) and check it"""
    shifted = [-Rational(v) - 1 for v in labels]
    target = cartan_point(g, shifted)
    generators = chevalley_generators(g)
    expected = [p.evaluate(target) for p in generators]
    section = principal_triple(g)
    point = section_point(section, expected, generators)
    v = []
    for b in g.borel_indices:
        value = point[b] - section.p_minus1[b]
        v.append(TruncatedSeries.constant(value, order))
    psi = tuple(TruncatedSeries.constant(1, order) for _ in range(g.rank))
    connection = OperConnection(g, psi, tuple(v), pole_order=1)
    got = residue(connection)
    matches = [row["value"] == e for row, e in zip(got["values"], expected)]
    return {
        "algebra": g.name,
        "highest_weight": [Rational(v) for v in labels],
        "connection": connection.to_dict(),
        "expected": expected,
        "residue": got["values"],
        "passed": all(matches),
    }


__all__ = [
    "TruncatedSeries",
    "MatrixSeries",
    "apply_gauge",
    "OperConnection",
    "parse_connection",
    "random_connection",
    "gauge_transform",
    "n_series",
    "random_gauge",
    "CanonicalOper",
    "gauge_reduce",
    "sl2_closed_form",
    "sigma_on_oper",
    "FixedOperMatch",
    "fixed_oper_match",
    "extend_oper",
    "residue",
    "cartan_point",
    "lambda_residue",
]
