"""
Dynkin diagram automorphisms and folded root data.

fold() builds the datum (Y, Y^vee, alpha_eta, alpha_eta^vee) with
Y = X_sigma (coinvariants, one basis vector per orbit of the X basis) and
Y^vee = (X^vee)^sigma (orbit sums of the X^vee basis). invariant_fold()
is the Langlands dual of folding the dual datum: its weight lattice is the
sigma-invariant sublattice X^sigma, which is where highest weights of the
folded group live when modules are built on the unfolded datum.
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from src.foldlab.errors import InvalidInputError, ComputationError
from src.foldlab.linalg import lattice_index
from src.foldlab.rootdata import (
    ADJOINT,
    OTHER,
    SIMPLY_CONNECTED,
    CartanMatrix,
    RootDatum,
    Weight,
    build_root_datum,
    identify_cartan_type,
    normalize_isogeny,
)

logger = logging.getLogger(__name__)

COINVARIANT = "coinvariant"
INVARIANT = "invariant"


# ============================================
# Automorphisms and orbits
# ============================================
@dataclass(frozen=True)
class Orbit:
    nodes: Tuple[int, ...]
    adjacent_pair: bool

    @property
    def labels(self) -> List[int]:
        return [i + 1 for i in self.nodes]

    @property
    def coroot_factor(self) -> int:
        return 2 if self.adjacent_pair else 1

    def to_dict(self) -> Dict:
        return {"nodes": self.labels, "adjacent_pair": self.adjacent_pair}


@dataclass(frozen=True)
class DiagramAutomorphism:
    """Node permutation, stored 0-based: images[i] = sigma(i)"""

    images: Tuple[int, ...]
    order: int

    @property
    def perm(self) -> List[int]:
        return [i + 1 for i in self.images]

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def inverse(self) -> "DiagramAutomorphism":
        inv = [0] * self.size
        for i, j in enumerate(self.images):
            inv[j] = i
        return DiagramAutomorphism(tuple(inv), self.order)

    def is_identity(self) -> bool:
        return self.order == 1

    def permute(self, values: Sequence) -> Tuple:
        """(sigma . v)_{sigma(i)} = v_i"""
        out = [None] * self.size
        for i, v in enumerate(values):
            out[self.images[i]] = v
        return tuple(out)

    def orbits(self, cartan: CartanMatrix) -> Tuple[Orbit, ...]:
        seen = set()
        out = []
        for start in range(self.size):
            if start in seen:
                continue
            nodes = [start]
            nxt = self.images[start]
            while nxt != start:
                nodes.append(nxt)
                nxt = self.images[nxt]
            seen.update(nodes)
            nodes.sort()
            adjacent = len(nodes) == 2 and cartan[nodes[0], nodes[1]] != 0
            out.append(Orbit(tuple(nodes), adjacent))
        return tuple(out)

    def to_dict(self) -> Dict:
        return {"perm": self.perm, "order": self.order}


def parse_perm(perm) -> Tuple[int, ...]:
    """Accept "3,2,1", [3, 2, 1] or a DiagramAutomorphism; return 1-based labels"""
    if isinstance(perm, DiagramAutomorphism):
        return tuple(perm.perm)
    if isinstance(perm, str):
        text = perm.strip()
        if not text:
            return ()
        try:
            return tuple(int(p) for p in text.split(","))
        except ValueError:
            raise InvalidInputError(f"permutation '{perm}' is not a comma-separated integer list")
    return tuple(int(p) for p in perm)


def validate_automorphism(perm, datum: RootDatum) -> DiagramAutomorphism:
    """Check a 1-based node permutation against the Cartan matrix"""
    labels = parse_perm(perm) or tuple(range(1, datum.rank + 1))
    n = datum.rank
    if sorted(labels) != list(range(1, n + 1)):
        raise InvalidInputError(
            f"permutation must be a bijection on nodes 1..{n}", perm=list(labels)
        )
    images = tuple(p - 1 for p in labels)
    cartan = datum.cartan
    for i in range(n):
        for j in range(n):
            if cartan[images[i], images[j]] != cartan[i, j]:
                raise InvalidInputError(
                    "permutation does not preserve the Cartan matrix",
                    perm=list(labels),
                    offending=[i + 1, j + 1],
                    expected=cartan[i, j],
                    found=cartan[images[i], images[j]],
                )
    order = 1
    current = images
    while current != tuple(range(n)):
        current = tuple(images[k] for k in current)
        order += 1
    return DiagramAutomorphism(images, order)


# ============================================
# Folded root data
# ============================================
@dataclass(frozen=True)
class FoldOrigin:
    """Where a folded datum came from; kind is coinvariant or invariant"""

    parent: RootDatum
    automorphism: DiagramAutomorphism
    orbits: Tuple[Orbit, ...]
    kind: str
    lattice_orbits: Tuple[Tuple[int, ...], ...]

    def dual(self) -> "FoldOrigin":
        kind = INVARIANT if self.kind == COINVARIANT else COINVARIANT
        return replace(self, parent=self.parent.dual(), kind=kind)

    def to_dict(self) -> Dict:
        return {
            "parent": {
                "series": self.parent.series,
                "rank": self.parent.rank,
                "isogeny": self.parent.isogeny,
            },
            "automorphism": self.automorphism.to_dict(),
            "orbits": [o.to_dict() for o in self.orbits],
            "kind": self.kind,
        }


def _lattice_permutation(basis_rows, sigma: DiagramAutomorphism) -> Tuple[int, ...]:
    """tau with e_a -> e_tau(a) realizing alpha_i -> alpha_sigma(i) on the lattice"""
    r = Matrix([list(row) for row in basis_rows])
    if r.rows != r.cols:
        raise InvalidInputError("folding needs a semisimple datum (square root matrix)")
    permuted = Matrix([list(basis_rows[sigma(i)]) for i in range(len(basis_rows))])
    s = r.inv() * permuted
    tau = []
    for a in range(s.rows):
        row = list(s.row(a))
        ones = [b for b, v in enumerate(row) if v == 1]
        if len(ones) != 1 or any(v != 0 for b, v in enumerate(row) if b != ones[0]):
            raise InvalidInputError(
                "automorphism does not permute the lattice basis of this datum",
                perm=sigma.perm,
            )
        tau.append(ones[0])
    return tuple(tau)


def _basis_orbits(tau: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    seen = set()
    out = []
    for start in range(len(tau)):
        if start in seen:
            continue
        orbit = [start]
        nxt = tau[start]
        while nxt != start:
            orbit.append(nxt)
            nxt = tau[nxt]
        seen.update(orbit)
        out.append(tuple(sorted(orbit)))
    return tuple(out)


def _isogeny_flags(roots, coroots) -> Tuple[int, int]:
    return lattice_index(coroots), lattice_index(roots)


def _isogeny_label(coroot_index: int, root_index: int) -> str:
    if coroot_index == 1:
        return SIMPLY_CONNECTED
    if root_index == 1:
        return ADJOINT
    return OTHER


def fold(datum: RootDatum, sigma: DiagramAutomorphism) -> RootDatum:
    """Root datum of the fixed-point group: Y = X_sigma, Y^vee = (X^vee)^sigma"""
    sigma = validate_automorphism(sigma.perm, datum)
    tau = _lattice_permutation(datum.roots, sigma)
    tau_vee = _lattice_permutation(datum.coroots, sigma)
    for a in range(datum.lattice_rank):
        for b in range(datum.lattice_rank):
            if datum.pairing[tau[a]][tau_vee[b]] != datum.pairing[a][b]:
                raise InvalidInputError("automorphism does not preserve the pairing", perm=sigma.perm)

    orbits = sigma.orbits(datum.cartan)
    x_orbits = _basis_orbits(tau)
    v_orbits = _basis_orbits(tau_vee)

    pairing = tuple(
        tuple(sum(datum.pairing[orbit[0]][b] for b in v_orbit) for v_orbit in v_orbits)
        for orbit in x_orbits
    )
    roots = tuple(
        tuple(sum(datum.roots[eta.nodes[0]][a] for a in orbit) for orbit in x_orbits)
        for eta in orbits
    )
    coroots = []
    for eta in orbits:
        total = [sum(datum.coroots[i][b] for i in eta.nodes) for b in range(datum.lattice_rank)]
        for v_orbit in v_orbits:
            if len({total[b] for b in v_orbit}) != 1:
                raise ComputationError("orbit sum of coroots is not sigma-invariant", orbit=eta.labels)
        coroots.append(tuple(eta.coroot_factor * total[v_orbit[0]] for v_orbit in v_orbits))
    coroots = tuple(coroots)

    k = len(orbits)
    entries = [[0] * k for _ in range(k)]
    for eta in range(k):
        for eta2 in range(k):
            entries[eta][eta2] = sum(
                roots[eta2][x] * pairing[x][y] * coroots[eta][y]
                for x in range(len(x_orbits))
                for y in range(len(v_orbits))
            )
    cartan = CartanMatrix(tuple(tuple(row) for row in entries))
    series, rank, node_map = identify_cartan_type(cartan.entries)
    coroot_index, root_index = _isogeny_flags(roots, coroots)
    origin = FoldOrigin(datum, sigma, orbits, COINVARIANT, x_orbits)
    folded = RootDatum(
        series=series,
        rank=rank,
        isogeny=_isogeny_label(coroot_index, root_index),
        cartan=cartan,
        roots=roots,
        coroots=coroots,
        pairing=pairing,
        node_map=node_map,
        origin=origin,
    ).check()
    logger.debug(
        f"Folded {datum.label} ({datum.isogeny}) by {sigma.perm} -> {folded.label} ({folded.isogeny})"
    )
    return folded


def langlands_dual(datum: RootDatum) -> RootDatum:
    return datum.dual()


def invariant_fold(datum: RootDatum, sigma: DiagramAutomorphism) -> RootDatum:
    """Datum with weight lattice X^sigma: the dual of fold(dual(datum))"""
    dual = datum.dual()
    folded = fold(dual, validate_automorphism(sigma.perm, dual))
    result = folded.dual()
    coroot_index, root_index = _isogeny_flags(result.roots, result.coroots)
    origin = FoldOrigin(
        datum,
        folded.origin.automorphism,
        folded.origin.orbits,
        INVARIANT,
        folded.origin.lattice_orbits,
    )
    return replace(result, isogeny=_isogeny_label(coroot_index, root_index), origin=origin)


@dataclass(frozen=True)
class IsogenyClass:
    label: str
    simply_connected: bool
    adjoint: bool
    coroot_index: int
    root_index: int
    doubled_orbits: int

    def matches(self, expected: str) -> bool:
        expected = normalize_isogeny(expected)
        if expected == SIMPLY_CONNECTED:
            return self.simply_connected
        if expected == ADJOINT:
            return self.adjoint
        return not (self.simply_connected or self.adjoint)

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "simply_connected": self.simply_connected,
            "adjoint": self.adjoint,
            "coroot_index": self.coroot_index,
            "root_index": self.root_index,
            "doubled_orbits": self.doubled_orbits,
        }


def classify_isogeny(datum: RootDatum) -> IsogenyClass:
    """Compare X with the root and weight lattices through lattice indices

    coroot_index = [X^vee : Z<alpha^vee>] (1 iff simply connected),
    root_index = [X : Z<alpha>] (1 iff adjoint). For a folded datum the
    coroot index is 2^r with r the number of adjacent-pair orbits.
    """
    coroot_index, root_index = _isogeny_flags(datum.roots, datum.coroots)
    doubled = 0
    origin = datum.origin
    if isinstance(origin, FoldOrigin):
        doubled = sum(1 for o in origin.orbits if o.adjacent_pair)
    return IsogenyClass(
        label=_isogeny_label(coroot_index, root_index),
        simply_connected=coroot_index == 1,
        adjoint=root_index == 1,
        coroot_index=coroot_index,
        root_index=root_index,
        doubled_orbits=doubled,
    )


# ============================================
# Weights across the fold
# ============================================
def _origin(folded: RootDatum) -> FoldOrigin:
    if not isinstance(folded.origin, FoldOrigin):
        raise InvalidInputError("datum was not produced by folding")
    return folded.origin


def embed_dominant(weight: Weight) -> Weight:
    """Dominant folded weight sum_eta a_eta omega_eta -> sum_eta a_eta sum_{i in eta} omega_i

    The image is sigma-fixed and dominant. On invariant_fold(d, sigma) this is a
    section of restrict_weight: restrict_weight(embed_dominant(w), folded) == w.
    It is not a section of the coinvariant projection of fold(d, sigma): there
    the orbit labels come back scaled.
    """
    folded = weight.datum
    origin = _origin(folded)
    if not weight.is_dominant():
        raise InvalidInputError("embed_dominant needs a dominant weight", labels=list(weight.labels))
    labels = [0] * origin.parent.rank
    for k, eta in enumerate(origin.orbits):
        for i in eta.nodes:
            labels[i] = weight.labels[k]
    return origin.parent.weight_from_labels(labels)


def is_sigma_fixed(weight: Weight, sigma: DiagramAutomorphism) -> bool:
    labels = weight.labels
    return all(labels[sigma(i)] == labels[i] for i in range(len(labels)))


def restrict_weight(weight: Weight, folded: RootDatum) -> Weight:
    """Image of a parent weight in the folded lattice

    Coinvariant folds use the projection X -> X_sigma; invariant folds
    accept only sigma-fixed weights and read them in the orbit-sum basis.
    """
    origin = _origin(folded)
    coords = weight.coords
    if origin.kind == COINVARIANT:
        return folded.weight([sum(coords[a] for a in orbit) for orbit in origin.lattice_orbits])
    if not is_sigma_fixed(weight, origin.automorphism):
        raise InvalidInputError("weight is not sigma-fixed", labels=list(weight.labels))
    return folded.weight([coords[orbit[0]] for orbit in origin.lattice_orbits])


def orbit_coroots(folded: RootDatum) -> List[Dict]:
    """Each folded simple coroot read back in X^vee against factor * sum of its orbit's coroots"""
    origin = _origin(folded)
    if origin.kind != COINVARIANT:
        raise InvalidInputError("orbit coroots are defined for fold(), not invariant_fold()")
    datum = origin.parent
    v_orbits = _basis_orbits(_lattice_permutation(datum.coroots, origin.automorphism))
    rows = []
    for k, eta in enumerate(origin.orbits):
        lifted = [0] * datum.lattice_rank
        for j, v_orbit in enumerate(v_orbits):
            for b in v_orbit:
                lifted[b] = folded.coroots[k][j]
        expected = [
            eta.coroot_factor * sum(datum.coroots[i][b] for i in eta.nodes) for b in range(datum.lattice_rank)
        ]
        rows.append(
            {
                "orbit": eta.labels,
                "adjacent_pair": eta.adjacent_pair,
                "coroot": lifted,
                "expected": expected,
                "match": lifted == expected,
            }
        )
    return rows


# ============================================
# Golden table rows
# ============================================
def _describe(datum: RootDatum) -> Dict:
    iso = classify_isogeny(datum)
    return {
        "series": datum.series,
        "rank": datum.rank,
        "isogeny": iso.label,
        "simply_connected": iso.simply_connected,
        "adjoint": iso.adjoint,
    }


def _matches(datum: RootDatum, expected: Dict) -> bool:
    return (
        datum.series == expected["series"]
        and datum.rank == int(expected["rank"])
        and classify_isogeny(datum).matches(expected["isogeny"])
    )


def table_check(row: Dict) -> Dict:
    """Run one (G, G_sigma) <-> (G^vee, G_sigma^vee) row of the folding table"""
    datum = build_root_datum(row["type"], int(row["rank"]), row["isogeny"])
    sigma = validate_automorphism(row["perm"], datum)
    folded = fold(datum, sigma)
    dual = datum.dual()
    folded_dual = folded.dual()
    checks = {
        "folded": _matches(folded, row["folded"]),
        "dual": _matches(dual, row["dual"]),
        "folded_dual": _matches(folded_dual, row["folded_dual"]),
    }
    return {
        "row": row.get("name", f"{row['type']}{row['rank']}"),
        "groups": row.get("groups", []),
        "computed": {
            "folded": _describe(folded),
            "dual": _describe(dual),
            "folded_dual": _describe(folded_dual),
        },
        "checks": checks,
        "passed": all(checks.values()),
    }


__all__ = [
    "COINVARIANT",
    "INVARIANT",
    "Orbit",
    "DiagramAutomorphism",
    "parse_perm",
    "validate_automorphism",
    "FoldOrigin",
    "fold",
    "langlands_dual",
    "invariant_fold",
    "IsogenyClass",
    "classify_isogeny",
    "embed_dominant",
    "is_sigma_fixed",
    "restrict_weight",
    "orbit_coroots",
    "table_check",
]
