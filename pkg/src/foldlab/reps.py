"""
Highest-weight representations: Freudenthal multiplicities, the Weyl
dimension formula, explicit modules with exact action matrices, the
diagram-automorphism action fixing the highest-weight vector, and twining
traces.

Weights are handled internally as tuples of Dynkin labels.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.polys.matrices import DomainMatrix

from config.settings import DIMENSION_CAP
from src.foldlab.errors import ComputationError, InvalidInputError
from src.foldlab.folding import (
    INVARIANT,
    DiagramAutomorphism,
    FoldOrigin,
    invariant_fold,
    is_sigma_fixed,
    restrict_weight,
)
from src.foldlab.linalg import (
    apply,
    columns_matrix,
    commutator,
    dm,
    entries_of,
    eye,
    in_span,
    independent_columns,
    inverse,
    rows_of,
    same,
    scaled,
    sparse,
    trace,
    zeros,
)
from src.foldlab.rootdata import RootDatum, Weight, label_form, positive_root_coords

logger = logging.getLogger(__name__)

Labels = Tuple[int, ...]


# ============================================
# Label arithmetic
# ============================================
def _simple_root_labels(entries) -> Tuple[Labels, ...]:
    """label_j(alpha_i) = a_ji"""
    n = len(entries)
    return tuple(tuple(entries[j][i] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def _positive_root_labels(entries) -> Tuple[Labels, ...]:
    simple = _simple_root_labels(entries)
    n = len(entries)
    out = []
    for coords in positive_root_coords(entries):
        out.append(tuple(sum(coords[i] * simple[i][j] for i in range(n)) for j in range(n)))
    return tuple(out)


def _form(entries, mu: Sequence, nu: Sequence) -> Rational:
    gram = label_form(entries)
    return sum(
        (Rational(mu[i]) * gram[i][j] * nu[j] for i in range(len(mu)) for j in range(len(nu)) if mu[i] and nu[j]),
        Rational(0),
    )


def _add(mu: Sequence, nu: Sequence, k: int = 1) -> Labels:
    return tuple(int(a + k * b) for a, b in zip(mu, nu))


def _reflect_labels(entries, mu: Labels, i: int) -> Labels:
    k = mu[i]
    return tuple(mu[j] - k * entries[j][i] for j in range(len(mu)))


def _dominant_labels(entries, mu: Labels) -> Labels:
    current = mu
    while True:
        negative = [i for i, v in enumerate(current) if v < 0]
        if not negative:
            return current
        current = _reflect_labels(entries, current, negative[0])


def _depth(entries, top: Labels, mu: Labels) -> int:
    """Height of top - mu in simple-root coordinates"""
    diff = Matrix([a - b for a, b in zip(top, mu)])
    coords = Matrix(entries).solve(diff)
    return int(sum(coords))


def _require_dominant(weight: Weight):
    if not weight.is_dominant():
        raise InvalidInputError("highest weight must be dominant", labels=[str(v) for v in weight.labels])


# ============================================
# Multiplicities and dimensions
# ============================================
@dataclass(frozen=True)
class WeightDiagram:
    datum: RootDatum = field(repr=False)
    highest: Weight
    entries: Dict[Weight, int] = field(compare=False)

    @property
    def total_dim(self) -> int:
        return sum(self.entries.values())

    def multiplicity(self, weight: Weight) -> int:
        return self.entries.get(weight, 0)

    def by_labels(self) -> Dict[Labels, int]:
        return {w.int_labels(): m for w, m in self.entries.items()}

    def to_dict(self) -> Dict:
        top = self.highest.int_labels()
        rows = sorted(
            self.by_labels().items(),
            key=lambda kv: (_depth(self.datum.cartan.entries, top, kv[0]), tuple(-x for x in kv[0])),
        )
        return {
            "highest_weight": list(top),
            "total_dim": self.total_dim,
            "weights": [{"labels": list(k), "multiplicity": m} for k, m in rows],
        }


def weyl_dim(datum: RootDatum, weight: Weight) -> int:
    """prod over positive roots of (lambda + rho, alpha) / (rho, alpha)"""
    _require_dominant(weight)
    entries = datum.cartan.entries
    lam = weight.int_labels()
    rho = (1,) * datum.rank
    shifted = _add(lam, rho)
    value = Rational(1)
    for alpha in _positive_root_labels(entries):
        value *= _form(entries, shifted, alpha) / _form(entries, rho, alpha)
    if value.q != 1:
        raise ComputationError("Weyl dimension formula returned a non-integer", value=str(value))
    return int(value)


@lru_cache(maxsize=256)
def _freudenthal_labels(entries, top: Labels) -> Dict[Labels, int]:
    positive = _positive_root_labels(entries)
    rank = len(top)
    rho = (1,) * rank

    dominant = {top}
    stack = [top]
    while stack:
        mu = stack.pop()
        for alpha in positive:
            nu = _add(mu, alpha, -1)
            if min(nu) >= 0 and nu not in dominant:
                dominant.add(nu)
                stack.append(nu)
    ordered = sorted(dominant, key=lambda mu: _depth(entries, top, mu))

    top_norm = _form(entries, _add(top, rho), _add(top, rho))
    mult: Dict[Labels, int] = {top: 1}

    def lookup(nu: Labels) -> int:
        return mult.get(_dominant_labels(entries, nu), 0)

    for mu in ordered[1:]:
        total = Rational(0)
        for alpha in positive:
            k = 1
            while True:
                nu = _add(mu, alpha, k)
                m = lookup(nu)
                if m == 0:
                    break
                total += m * _form(entries, nu, alpha)
                k += 1
        denominator = top_norm - _form(entries, _add(mu, rho), _add(mu, rho))
        value = 2 * total / denominator
        if value.q != 1:
            raise ComputationError("Freudenthal recursion produced a non-integer", weight=list(mu))
        mult[mu] = int(value)

    full: Dict[Labels, int] = {}
    for mu, m in mult.items():
        if m == 0:
            continue
        orbit = {mu}
        frontier = [mu]
        while frontier:
            nu = frontier.pop()
            for i in range(rank):
                if nu[i] == 0:
                    continue
                image = _reflect_labels(entries, nu, i)
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        for nu in orbit:
            full[nu] = m
    return full


def freudenthal(datum: RootDatum, weight: Weight) -> WeightDiagram:
    """Exact weight multiplicities of V(lambda)"""
    _require_dominant(weight)
    table = _freudenthal_labels(datum.cartan.entries, weight.int_labels())
    entries = {datum.weight_from_labels(mu): m for mu, m in table.items()}
    logger.debug(f"Freudenthal {datum.label} {weight.int_labels()}: {sum(table.values())} dims")
    return WeightDiagram(datum, weight, entries)


def weyl_character_product(datum: RootDatum, lam: Weight, mu: Weight) -> Dict[Labels, int]:
    """Decomposition of V(lam) (x) V(mu) by reflecting lam + nu + rho into the dominant chamber"""
    _require_dominant(lam)
    entries = datum.cartan.entries
    rank = datum.rank
    top = lam.int_labels()
    out: Dict[Labels, int] = {}
    for nu, m in _freudenthal_labels(entries, mu.int_labels()).items():
        current = tuple(top[i] + nu[i] + 1 for i in range(rank))
        sign = 1
        while True:
            negative = [i for i, v in enumerate(current) if v < 0]
            if not negative:
                break
            current = _reflect_labels(entries, current, negative[0])
            sign = -sign
        if 0 in current:
            continue
        key = tuple(v - 1 for v in current)
        out[key] = out.get(key, 0) + sign * m
    return {k: v for k, v in out.items() if v != 0}


# ============================================
# Explicit modules
# ============================================
@dataclass
class _Space:
    dim: int
    gram: List[List[Rational]]
    words: List[Tuple[int, ...]]
    parents: List[Optional[Tuple[int, int]]]
    raising: Dict[int, List[List[Rational]]]


@dataclass(frozen=True, eq=False)
class HWModule:
    """V(lambda) with basis f_{i1}...f_{ik} v_lambda and exact generator matrices"""

    datum: RootDatum = field(repr=False)
    highest: Weight
    weight_labels: Tuple[Labels, ...] = field(repr=False)
    words: Tuple[Tuple[int, ...], ...] = field(repr=False)
    parents: Tuple[Optional[Tuple[int, int]], ...] = field(repr=False)
    e: Tuple[DomainMatrix, ...] = field(repr=False)
    f: Tuple[DomainMatrix, ...] = field(repr=False)
    h: Tuple[DomainMatrix, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.words)

    def weight_of(self, k: int) -> Weight:
        return self.datum.weight_from_labels(self.weight_labels[k])

    def weight_blocks(self) -> Dict[Labels, List[int]]:
        blocks: Dict[Labels, List[int]] = {}
        for k, mu in enumerate(self.weight_labels):
            blocks.setdefault(mu, []).append(k)
        return blocks

    def multiplicities(self) -> Dict[Labels, int]:
        return {mu: len(idx) for mu, idx in self.weight_blocks().items()}

    def check_relations(self) -> Dict[str, bool]:
        """[h_i, e_j] = a_ij e_j, [h_i, f_j] = -a_ij f_j, [e_i, f_j] = delta_ij h_i"""
        cartan = self.datum.cartan
        l = self.datum.rank
        he = hf = ef = True
        for i in range(l):
            for j in range(l):
                he &= same(commutator(self.h[i], self.e[j]), scaled(self.e[j], cartan[i, j]))
                hf &= same(commutator(self.h[i], self.f[j]), scaled(self.f[j], -cartan[i, j]))
                target = self.h[i] if i == j else zeros(self.dim, self.dim)
                ef &= same(commutator(self.e[i], self.f[j]), target)
        return {"h_e": he, "h_f": hf, "e_f": ef}

    def to_dict(self) -> Dict:
        return {
            "series": self.datum.series,
            "rank": self.datum.rank,
            "highest_weight": list(self.highest.int_labels()),
            "dim": self.dim,
            "basis": [
                {"word": [i + 1 for i in w], "weight": list(mu)}
                for w, mu in zip(self.words, self.weight_labels)
            ],
        }


def construct_module(datum: RootDatum, weight: Weight, cap: Optional[int] = None) -> HWModule:
    """Build V(lambda) level by level using the contravariant form

    Candidates at weight nu are f_i b for basis vectors b of V_{nu + alpha_i}.
    Their e_j images follow from e_j f_i b = f_i e_j b + delta_ij <wt b, alpha_i^vee> b
    and their Gram matrix from <f_i b, c> = <b, e_i c>. Pivot columns of the
    Gram matrix give a basis; the radical is the null space of the form.
    """
    _require_dominant(weight)
    cap = DIMENSION_CAP if cap is None else cap
    dim = weyl_dim(datum, weight)
    if dim > cap:
        raise InvalidInputError(
            f"module dimension {dim} exceeds the cap {cap}", dimension=dim, cap=cap
        )
    entries = datum.cartan.entries
    rank = datum.rank
    simple = _simple_root_labels(entries)
    top = weight.int_labels()

    spaces: Dict[Labels, _Space] = {top: _Space(1, [[Rational(1)]], [()], [None], {})}
    lowering: Dict[Tuple[Labels, int], List[List[Rational]]] = {}
    levels: List[List[Labels]] = [[top]]

    while True:
        previous = levels[-1]
        targets = sorted(
            {_add(mu, simple[i], -1) for mu in previous for i in range(rank)},
            key=lambda mu: tuple(-x for x in mu),
        )
        level: List[Labels] = []
        for nu in targets:
            candidates = []
            for i in range(rank):
                src = _add(nu, simple[i])
                if src in spaces:
                    candidates.extend((i, b) for b in range(spaces[src].dim))
            raised = []
            for i, b in candidates:
                src_label = _add(nu, simple[i])
                src = spaces[src_label]
                images = {}
                for j in range(rank):
                    tgt_label = _add(nu, simple[j])
                    if tgt_label not in spaces:
                        continue
                    vector = [Rational(0)] * spaces[tgt_label].dim
                    if j in src.raising:
                        above = _add(src_label, simple[j])
                        lower = lowering.get((above, i))
                        if lower is not None:
                            for k, coef in enumerate(src.raising[j][b]):
                                if coef:
                                    for r, value in enumerate(lower[k]):
                                        vector[r] += coef * value
                    if i == j:
                        vector[b] += src_label[i]
                    images[j] = vector
                raised.append(images)

            gram = []
            for i, b in candidates:
                src = spaces[_add(nu, simple[i])]
                row = []
                for images in raised:
                    ec = images[i]
                    row.append(sum((src.gram[b][k] * ec[k] for k in range(src.dim) if ec[k]), Rational(0)))
                gram.append(row)
            if not candidates or all(v == 0 for row in gram for v in row):
                continue
            basis = list(independent_columns(gram))
            gram_b = [[gram[r][c] for c in basis] for r in basis]
            coords = rows_of(inverse(gram_b) * dm([[gram[r][c] for c in range(len(candidates))] for r in basis]))

            space = _Space(
                dim=len(basis),
                gram=gram_b,
                words=[],
                parents=[],
                raising={},
            )
            for k in basis:
                i, b = candidates[k]
                src_label = _add(nu, simple[i])
                space.words.append((i,) + spaces[src_label].words[b])
                space.parents.append((i, b))
            for j in range(rank):
                if _add(nu, simple[j]) in spaces:
                    space.raising[j] = [raised[k][j] for k in basis]
            for idx, (i, b) in enumerate(candidates):
                src_label = _add(nu, simple[i])
                vectors = lowering.setdefault((src_label, i), [None] * spaces[src_label].dim)
                vectors[b] = [coords[r][idx] for r in range(len(basis))]
            spaces[nu] = space
            level.append(nu)
        if not level:
            break
        levels.append(level)

    order = [mu for level in levels for mu in level]
    offsets = {}
    position = 0
    for mu in order:
        offsets[mu] = position
        position += spaces[mu].dim
    total = position
    if total != dim:
        raise ComputationError("module dimension disagrees with the Weyl formula", built=total, expected=dim)

    e_entries = [dict() for _ in range(rank)]
    f_entries = [dict() for _ in range(rank)]
    h_entries = [dict() for _ in range(rank)]
    weight_labels: List[Labels] = []
    words: List[Tuple[int, ...]] = []
    parents: List[Optional[Tuple[int, int]]] = []
    for mu in order:
        space = spaces[mu]
        base = offsets[mu]
        for k in range(space.dim):
            weight_labels.append(mu)
            words.append(space.words[k])
            parent = space.parents[k]
            if parent is None:
                parents.append(None)
            else:
                i, b = parent
                parents.append((i, offsets[_add(mu, simple[i])] + b))
            for i in range(rank):
                if mu[i]:
                    h_entries[i][(base + k, base + k)] = mu[i]
        for j, images in space.raising.items():
            tgt = offsets[_add(mu, simple[j])]
            for k, vector in enumerate(images):
                for r, value in enumerate(vector):
                    if value:
                        e_entries[j][(tgt + r, base + k)] = value
    for (src_label, i), vectors in lowering.items():
        tgt_label = _add(src_label, simple[i], -1)
        if tgt_label not in spaces:
            continue
        for b, vector in enumerate(vectors):
            if vector is None:
                continue
            for r, value in enumerate(vector):
                if value:
                    f_entries[i][(offsets[tgt_label] + r, offsets[src_label] + b)] = value

    shape = (total, total)
    module = HWModule(
        datum=datum,
        highest=weight,
        weight_labels=tuple(weight_labels),
        words=tuple(words),
        parents=tuple(parents),
        e=tuple(sparse(x, shape) for x in e_entries),
        f=tuple(sparse(x, shape) for x in f_entries),
        h=tuple(sparse(x, shape) for x in h_entries),
    )
    logger.debug(f"Constructed module {datum.label} {top}: dim {total}")
    return module


def sigma_on_module(module: HWModule, sigma: DiagramAutomorphism) -> DomainMatrix:
    """S(f_{i1}...f_{ik} v) = f_{sigma(i1)}...f_{sigma(ik)} v in the module basis"""
    if not is_sigma_fixed(module.highest, sigma):
        raise InvalidInputError(
            "highest weight is not sigma-invariant",
            labels=list(module.highest.int_labels()),
            perm=sigma.perm,
        )
    n = module.dim
    columns: List[List[Rational]] = []
    for k in range(n):
        parent = module.parents[k]
        if parent is None:
            vector = [Rational(0)] * n
            vector[k] = Rational(1)
        else:
            i, p = parent
            vector = apply(module.f[sigma(i)], columns[p])
        columns.append(vector)
    s = columns_matrix(columns, n)

    for i in range(module.datum.rank):
        j = sigma(i)
        for name, ops in (("e", module.e), ("f", module.f), ("h", module.h)):
            if not same(s * ops[i], ops[j] * s):
                raise ComputationError(f"sigma action fails to intertwine {name}_{i + 1}", perm=sigma.perm)
    power = eye(n)
    for _ in range(sigma.order):
        power = power * s
    if not same(power, eye(n)):
        raise ComputationError("sigma action does not have the expected order", order=sigma.order)
    return s


# ============================================
# Twining
# ============================================
@dataclass(frozen=True)
class TwiningReport:
    highest_weight: Labels
    folded_highest_weight: Labels
    folded_type: str
    rows: Tuple[Dict, ...]
    global_trace: int
    folded_dim: int

    @property
    def passed(self) -> bool:
        return self.global_trace == self.folded_dim and all(r["match"] for r in self.rows)

    def to_dict(self) -> Dict:
        return {
            "highest_weight": list(self.highest_weight),
            "folded_type": self.folded_type,
            "folded_highest_weight": list(self.folded_highest_weight),
            "rows": list(self.rows),
            "global_trace": self.global_trace,
            "folded_dim": self.folded_dim,
            "passed": self.passed,
        }


def twining_report(
    module: HWModule,
    sigma: DiagramAutomorphism,
    folded: Optional[RootDatum] = None,
    s: Optional[DomainMatrix] = None,
) -> TwiningReport:
    """Compare tr(sigma | V_mu(lambda)) with dim W_mu(lambda) weight by weight

    The folded side is the datum with weight lattice X^sigma (invariant_fold);
    sigma-fixed weights of V(lambda) restrict to it, and the other weight
    spaces are permuted by sigma so contribute nothing to the trace.
    """
    datum = module.datum
    if folded is None:
        folded = invariant_fold(datum, sigma)
    origin = folded.origin
    if not isinstance(origin, FoldOrigin) or origin.kind != INVARIANT or origin.parent.cartan != datum.cartan:
        raise InvalidInputError("folded datum must be invariant_fold of the module datum")
    if s is None:
        s = sigma_on_module(module, sigma)

    folded_top = restrict_weight(module.highest, folded)
    diagram = freudenthal(folded, folded_top).by_labels()
    folded_dim = weyl_dim(folded, folded_top)

    traces: Dict[Labels, int] = {}
    diagonal = {(i, j): v for (i, j), v in entries_of(s).items() if i == j}
    for mu, indices in module.weight_blocks().items():
        weight = datum.weight_from_labels(mu)
        if not is_sigma_fixed(weight, sigma):
            continue
        key = restrict_weight(weight, folded).int_labels()
        value = sum((diagonal.get((k, k), 0) for k in indices), Rational(0))
        traces[key] = int(value)

    rows = []
    for key in sorted(set(traces) | set(diagram), key=lambda mu: tuple(-x for x in mu)):
        t = traces.get(key, 0)
        m = diagram.get(key, 0)
        rows.append({"folded_weight": list(key), "trace": t, "folded_multiplicity": m, "match": t == m})
    report = TwiningReport(
        highest_weight=module.highest.int_labels(),
        folded_highest_weight=folded_top.int_labels(),
        folded_type=folded.label,
        rows=tuple(rows),
        global_trace=int(trace(s)),
        folded_dim=folded_dim,
    )
    logger.debug(f"Twining {datum.label} {report.highest_weight}: trace {report.global_trace} vs {folded_dim}")
    return report


# ============================================
# Lifting a matrix realization to a module
# ============================================
def _flatten(matrix: DomainMatrix) -> List[Rational]:
    n, m = matrix.shape
    out = [Rational(0)] * (n * m)
    for (i, j), v in entries_of(matrix).items():
        out[i * m + j] = v
    return out


def module_representation(module: HWModule, realization) -> Tuple[DomainMatrix, ...]:
    """Operators of every basis element of the realization on the module

    Basis elements are reached as nested brackets of the Chevalley
    generators; the module operators follow the same brackets.
    """
    if realization.cartan != module.datum.cartan:
        raise InvalidInputError("realization and module have different Cartan matrices")
    generators = []
    for i in range(realization.rank):
        generators.append((realization.e[i], module.e[i]))
        generators.append((realization.f[i], module.f[i]))

    span: List[List[Rational]] = []
    operators: List[DomainMatrix] = []

    def admit(x: DomainMatrix, op: DomainMatrix) -> bool:
        flat = _flatten(x)
        if all(v == 0 for v in flat) or (span and in_span(span, flat) is not None):
            return False
        span.append(flat)
        operators.append(op)
        return True

    frontier = [(x, op) for x, op in generators if admit(x, op)]
    while frontier and len(span) < realization.dim:
        new = []
        for x, op in frontier:
            for g, gop in generators:
                y = commutator(g, x)
                yop = commutator(gop, op)
                if admit(y, yop):
                    new.append((y, yop))
        frontier = new
    if len(span) != realization.dim:
        raise ComputationError("Chevalley generators do not span the realization", spanned=len(span))

    lifted = []
    n = module.dim
    for x in realization.basis:
        coeffs = in_span(span, _flatten(x))
        op = zeros(n, n)
        for c, g in zip(coeffs, operators):
            if c:
                op = op + scaled(g, c)
        lifted.append(op)
    return tuple(lifted)


__all__ = [
    "WeightDiagram",
    "weyl_dim",
    "freudenthal",
    "weyl_character_product",
    "HWModule",
    "construct_module",
    "sigma_on_module",
    "TwiningReport",
    "twining_report",
    "module_representation",
]
