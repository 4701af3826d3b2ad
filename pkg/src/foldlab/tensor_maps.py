"""
Partitions, the type A and type D weight maps, Littlewood-Richardson
coefficients and the non-monoidality witness.

Partitions are tuples of weakly decreasing non-negative integers. In a PGL_n
context they are taken modulo adding a constant to all n parts; the
canonical representative has smallest part 0 and trailing zeros stripped.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Rational

from src.foldlab.errors import ComputationError, InvalidInputError
from src.foldlab.reps import weyl_character_product
from src.foldlab.rootdata import Weight, build_root_datum, weight_from_parts

logger = logging.getLogger(__name__)

Parts = Tuple[int, ...]


# ============================================
# Partitions
# ============================================
def validate_partition(parts: Sequence[int], length: Optional[int] = None) -> Parts:
    """Check weak decrease and non-negativity; pad with zeros to length"""
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise InvalidInputError("partition parts must be non-negative", parts=list(parts))
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise InvalidInputError("partition parts must be weakly decreasing", parts=list(parts))
    if length is not None:
        if len(parts) > length:
            stripped = strip_zeros(parts)
            if len(stripped) > length:
                raise InvalidInputError(f"partition has more than {length} parts", parts=list(parts))
            parts = stripped
        parts = parts + (0,) * (length - len(parts))
    return parts


def strip_zeros(parts: Sequence[int]) -> Parts:
    parts = list(parts)
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def normalize_pgl(parts: Sequence[int], n: int) -> Parts:
    """Canonical PGL_n representative: subtract the smallest of the n parts"""
    parts = [int(p) for p in parts]
    if len(parts) > n:
        raise InvalidInputError(f"PGL_{n} weights have at most {n} parts", parts=parts)
    parts = parts + [0] * (n - len(parts))
    if any(parts[i] < parts[i + 1] for i in range(n - 1)):
        raise InvalidInputError("parts must be weakly decreasing", parts=parts)
    low = parts[-1]
    return strip_zeros(p - low for p in parts)


def dualize_A(parts: Sequence[int], n: int) -> Parts:
    """(a_1, ..., a_n) -> (-a_n, ..., -a_1), renormalized"""
    padded = list(parts) + [0] * (n - len(parts))
    return normalize_pgl([-a for a in reversed(padded)], n)


def gl_dim(parts: Sequence[int], n: int) -> int:
    """Dimension of the GL_n irreducible with highest weight parts"""
    a = validate_partition(parts, n)
    value = Rational(1)
    for i in range(n):
        for j in range(i + 1, n):
            value *= Rational(a[i] - a[j] + j - i, j - i)
    return int(value)


@dataclass(frozen=True)
class Partition:
    """A partition read in a GL_n or PGL_n context"""

    parts: Parts
    n: int

    @classmethod
    def parse(cls, parts: Sequence[int], n: int) -> "Partition":
        return cls(strip_zeros(validate_partition(parts, n)), n)

    @property
    def padded(self) -> Parts:
        return self.parts + (0,) * (self.n - len(self.parts))

    def pgl(self) -> Parts:
        return normalize_pgl(self.parts, self.n)

    def dual(self) -> Parts:
        return dualize_A(self.parts, self.n)

    def is_self_dual(self) -> bool:
        return self.dual() == self.pgl()

    @property
    def dim(self) -> int:
        return gl_dim(self.padded, self.n)

    def weight(self) -> Weight:
        datum = build_root_datum("A", self.n - 1)
        return weight_from_parts(datum, self.padded)

    def to_dict(self) -> Dict:
        return {"parts": list(self.parts), "n": self.n, "pgl": list(self.pgl()), "dim": self.dim}


# ============================================
# Weight maps
# ============================================
def weight_map_A(parts: Sequence[int], n: int) -> Parts:
    """Sp_{2n} highest weight (a_1..a_n) -> PGL_{2n} highest weight of length 2n

    (a_1+a_1, ..., a_1+a_n, a_1-a_n, ..., a_1-a_2, 0)
    """
    a = validate_partition(parts, n)
    if n == 0:
        return ()
    head = tuple(a[0] + a[i] for i in range(n))
    tail = tuple(a[0] - a[i] for i in range(n - 1, 0, -1))
    return head + tail + (0,)


def labels_from_parts_D(a: Sequence[int], n: int) -> Tuple[int, ...]:
    """L-coordinates (a_1..a_{n-1}, 0) of D_n -> Dynkin labels"""
    a = validate_partition(a, n - 1)
    coords = list(a) + [0]
    labels = [coords[i] - coords[i + 1] for i in range(n - 2)]
    labels.append(coords[n - 2] - coords[n - 1])
    labels.append(coords[n - 2] + coords[n - 1])
    return tuple(labels)


def weight_map_D(a: Sequence[int], n: int) -> Weight:
    """SO_{2n-1} weight a_1 L'_1 + ... -> the Spin_{2n} weight a_1 L_1 + ..."""
    if n < 4:
        raise InvalidInputError("type D weight map needs n >= 4", n=n)
    datum = build_root_datum("D", n)
    return datum.weight_from_labels(labels_from_parts_D(a, n))


# ============================================
# Littlewood-Richardson
# ============================================
def _horizontal_strips(shape: List[int], size: int, rows: int) -> Iterator[List[int]]:
    """Shapes obtained by adding a horizontal strip of the given size"""

    def extend(i: int, remaining: int, built: List[int]):
        if i == rows:
            if remaining == 0:
                yield list(built)
            return
        current = shape[i]
        upper = remaining if i == 0 else min(remaining, shape[i - 1] - current)
        for add in range(upper, -1, -1):
            built.append(current + add)
            yield from extend(i + 1, remaining - add, built)
            built.pop()

    yield from extend(0, size, [])


def lr_coefficients(lam: Sequence[int], mu: Sequence[int], n: Optional[int] = None) -> Dict[Parts, int]:
    """c^nu_{lam, mu} for all nu with at most n rows

    Fills nu/lam with mu_1 ones, mu_2 twos, ... as successive horizontal
    strips whose row-reading word (right to left, top to bottom) is a
    lattice word.
    """
    lam = strip_zeros(validate_partition(lam))
    mu = strip_zeros(validate_partition(mu))
    rows = n if n is not None else len(lam) + len(mu)
    if len(lam) > rows or len(mu) > rows:
        return {}
    start = list(lam) + [0] * (rows - len(lam))
    results: Counter = Counter()

    def place(shape: List[int], previous: Optional[List[int]], k: int):
        if k == len(mu):
            results[strip_zeros(shape)] += 1
            return
        for new in _horizontal_strips(shape, mu[k], rows):
            added = [new[i] - shape[i] for i in range(rows)]
            if previous is not None:
                # the k+1's up to row r never outnumber the k's strictly above
                running_k, running_prev, ok = 0, 0, True
                for r in range(rows):
                    running_k += added[r]
                    if running_k > running_prev:
                        ok = False
                        break
                    running_prev += previous[r]
                if not ok:
                    continue
            place(new, added, k + 1)

    place(start, None, 0)
    logger.debug(f"LR {lam} x {mu} in {rows} rows: {len(results)} constituents")
    return dict(results)


def lr_by_characters(lam: Sequence[int], mu: Sequence[int], n: int) -> Dict[Parts, int]:
    """Same decomposition through Weyl characters of SL_n, lifted back to GL_n"""
    lam = validate_partition(lam, n)
    mu = validate_partition(mu, n)
    datum = build_root_datum("A", n - 1)
    size = sum(lam) + sum(mu)
    out: Dict[Parts, int] = {}
    table = weyl_character_product(datum, weight_from_parts(datum, lam), weight_from_parts(datum, mu))
    for labels, m in table.items():
        parts = [0] * n
        for i in range(n - 2, -1, -1):
            parts[i] = parts[i + 1] + labels[i]
        shift, rest = divmod(size - sum(parts), n)
        if rest:
            raise ComputationError("character constituent has the wrong total size", labels=list(labels))
        out[strip_zeros(p + shift for p in parts)] = m
    return out


def lr_report(lam: Sequence[int], mu: Sequence[int], n: int) -> Dict:
    """LR decomposition with the GL_n dimension identity and PGL keys"""
    table = lr_coefficients(lam, mu, n)
    lhs = gl_dim(validate_partition(lam, n), n) * gl_dim(validate_partition(mu, n), n)
    rhs = sum(c * gl_dim(validate_partition(nu, n), n) for nu, c in table.items())
    constituents = [
        {"nu": list(nu), "pgl": list(normalize_pgl(nu, n)), "coefficient": c, "dim": gl_dim(validate_partition(nu, n), n)}
        for nu, c in sorted(table.items(), reverse=True)
    ]
    return {
        "lhs": list(strip_zeros(lam)),
        "rhs": list(strip_zeros(mu)),
        "n": n,
        "constituents": constituents,
        "dimension_identity": {"product": lhs, "sum": rhs, "holds": lhs == rhs},
        "passed": lhs == rhs,
    }


# ============================================
# Non-monoidality witness
# ============================================
WITNESS_LAMBDA = (4, 2, 2)
WITNESS_MU = (2, 2)
WITNESS_NU = (6, 3, 2, 1)
WITNESS_N = 4


def nonmonoidality_witness() -> Dict:
    """Tensor product of two self-dual PGL_4 weights containing a non self-dual constituent

    Self-dual PGL_4 weights are the images of Sp_4 weights, so the
    constituent cannot come from an SO_5 representation.
    """
    n = WITNESS_N
    table = lr_coefficients(WITNESS_LAMBDA, WITNESS_MU, n)
    by_pgl = {normalize_pgl(nu, n): c for nu, c in table.items()}
    coefficient = table.get(WITNESS_NU, 0)
    nu_pgl = normalize_pgl(WITNESS_NU, n)
    nu_dual = dualize_A(WITNESS_NU, n)

    inputs_self_dual = all(
        dualize_A(p, n) == normalize_pgl(p, n) for p in (WITNESS_LAMBDA, WITNESS_MU)
    )
    dual_closed = all(by_pgl.get(dualize_A(nu, n), 0) == c for nu, c in by_pgl.items())
    report = lr_report(WITNESS_LAMBDA, WITNESS_MU, n)

    witness_found = coefficient >= 1 and nu_dual != nu_pgl
    passed = witness_found and inputs_self_dual and dual_closed and report["passed"]
    if not witness_found:
        logger.error("Non-monoidality witness disappeared")
    return {
        "lambda": list(WITNESS_LAMBDA),
        "mu": list(WITNESS_MU),
        "n": n,
        "nu": list(WITNESS_NU),
        "nu_pgl": list(nu_pgl),
        "nu_dual": list(nu_dual),
        "coefficient": coefficient,
        "inputs_self_dual": inputs_self_dual,
        "dual_closed": dual_closed,
        "dimension_identity": report["dimension_identity"],
        "preimages": {
            "(2,2)": list(weight_map_A((2, 2), 2)),
            "(2,0)": list(weight_map_A((2, 0), 2)),
        },
        "passed": passed,
    }


__all__ = [
    "Parts",
    "Partition",
    "validate_partition",
    "strip_zeros",
    "normalize_pgl",
    "dualize_A",
    "gl_dim",
    "weight_map_A",
    "labels_from_parts_D",
    "weight_map_D",
    "lr_coefficients",
    "lr_by_characters",
    "lr_report",
    "nonmonoidality_witness",
]
