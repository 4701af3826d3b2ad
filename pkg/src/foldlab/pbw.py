"""
Universal enveloping algebra of a matrix realization in PBW normal form.

Monomials are words in basis indices; a word is normal when it is weakly
increasing, i.e. ordered Cartan < positive < negative as the realization
lays out its basis. Products are straightened with X_a X_b = X_b X_a +
[X_a, X_b] and the normal forms of words are memoized per algebra.
"""

import logging
from itertools import permutations
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import Rational
from sympy.polys.matrices import DomainMatrix

from src.foldlab.errors import InvalidInputError
from src.foldlab.linalg import apply, eye, scaled, zeros
from src.foldlab.realizations import MatrixRealization

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


class PBWAlgebra:
    """U(g) for a fixed realization g"""

    def __init__(self, realization: MatrixRealization):
        self.realization = realization
        self._normal: Dict[Word, Dict[Word, Rational]] = {}

    @property
    def dim(self) -> int:
        return self.realization.dim

    def normal_form(self, word: Word) -> Dict[Word, Rational]:
        cached = self._normal.get(word)
        if cached is not None:
            return cached
        descent = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
        if descent is None:
            result = {word: Rational(1)}
        else:
            i = descent
            a, b = word[i], word[i + 1]
            result: Dict[Word, Rational] = {}
            swapped = word[:i] + (b, a) + word[i + 2:]
            for w, c in self.normal_form(swapped).items():
                result[w] = result.get(w, Rational(0)) + c
            for k, c in enumerate(self.realization.structure[a][b]):
                if not c:
                    continue
                for w, d in self.normal_form(word[:i] + (k,) + word[i + 2:]).items():
                    result[w] = result.get(w, Rational(0)) + c * d
            result = {w: c for w, c in result.items() if c != 0}
        self._normal[word] = result
        return result

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    def element(self, terms: Dict[Word, Rational]) -> "UEAElement":
        out: Dict[Word, Rational] = {}
        for word, c in terms.items():
            if not c:
                continue
            for w, d in self.normal_form(tuple(word)).items():
                out[w] = out.get(w, Rational(0)) + Rational(c) * d
        return UEAElement(self, {w: c for w, c in out.items() if c != 0})

    def zero(self) -> "UEAElement":
        return UEAElement(self, {})

    def one(self) -> "UEAElement":
        return UEAElement(self, {(): Rational(1)})

    def generator(self, a: int) -> "UEAElement":
        return UEAElement(self, {(a,): Rational(1)})

    def linear(self, coords: Sequence) -> "UEAElement":
        """sum_a coords[a] X_a"""
        return UEAElement(self, {(a,): Rational(c) for a, c in enumerate(coords) if c})

    def symmetrize(self, factors: Sequence[Sequence], coefficient=1) -> "UEAElement":
        """Average over orderings of a product of linear elements (given as coordinates)"""
        orders = list(permutations(range(len(factors))))
        total = self.zero()
        for order in orders:
            term = self.one()
            for k in order:
                term = term * self.linear(factors[k])
            total = total + term
        return total * (Rational(coefficient) / len(orders))

    def casimir(self) -> "UEAElement":
        """sum_a X_a X^a with the kappa-dual basis"""
        dual = self.realization.dual_basis
        terms: Dict[Word, Rational] = {}
        for a in range(self.dim):
            for b, c in enumerate(dual[a]):
                if c:
                    terms[(a, b)] = terms.get((a, b), Rational(0)) + c
        return self.element(terms)

    # ------------------------------------------------------------------
    # Automorphisms and representations
    # ------------------------------------------------------------------
    def apply_linear(self, x: "UEAElement", operator: DomainMatrix) -> "UEAElement":
        """Extend a linear map of g (on coordinates) to an algebra map of U(g)"""
        images = [self.linear(apply(operator, [int(k == a) for k in range(self.dim)])) for a in range(self.dim)]
        total = self.zero()
        for word, c in x.terms.items():
            term = self.one()
            for a in word:
                term = term * images[a]
            total = total + term * c
        return total

    def represent(self, x: "UEAElement", operators: Sequence[DomainMatrix]) -> DomainMatrix:
        """Image of x given the operators of the basis elements"""
        n = operators[0].shape[0] if operators else 0
        total = zeros(n, n)
        cache: Dict[Word, DomainMatrix] = {(): eye(n)}

        def product(word: Word) -> DomainMatrix:
            if word not in cache:
                cache[word] = product(word[:-1]) * operators[word[-1]]
            return cache[word]

        for word, c in x.terms.items():
            total = total + scaled(product(word), c)
        return total


class UEAElement:
    """Element of U(g) as {normal word: coefficient}"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: PBWAlgebra, terms: Dict[Word, Rational]):
        self.algebra = algebra
        self.terms = terms

    def _check(self, other: "UEAElement"):
        if other.algebra is not self.algebra:
            raise InvalidInputError("elements of different enveloping algebras")

    def __add__(self, other: "UEAElement") -> "UEAElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Rational(0)) + c
        return UEAElement(self.algebra, {w: c for w, c in out.items() if c != 0})

    def __neg__(self) -> "UEAElement":
        return UEAElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        return self + (-other)

    def __mul__(self, other) -> "UEAElement":
        if not isinstance(other, UEAElement):
            c = Rational(other)
            if c == 0:
                return self.algebra.zero()
            return UEAElement(self.algebra, {w: c * v for w, v in self.terms.items()})
        self._check(other)
        out: Dict[Word, Rational] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, d in self.algebra.normal_form(w1 + w2).items():
                    out[w] = out.get(w, Rational(0)) + c1 * c2 * d
        return UEAElement(self.algebra, {w: c for w, c in out.items() if c != 0})

    __rmul__ = __mul__

    def bracket(self, other: "UEAElement") -> "UEAElement":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def proportional_to(self, other: "UEAElement"):
        """c with self = c * other, or None"""
        if other.is_zero():
            return Rational(0) if self.is_zero() else None
        word, value = next(iter(other.terms.items()))
        c = self.terms.get(word, Rational(0)) / value
        return c if (self - other * c).is_zero() else None

    def coefficient_vector(self, words: List[Word]) -> List[Rational]:
        return [self.terms.get(w, Rational(0)) for w in words]

    def __eq__(self, other) -> bool:
        return isinstance(other, UEAElement) and other.algebra is self.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_dict(self) -> Dict[str, Rational]:
        labels = self.algebra.realization.labels
        return {"*".join(labels[a] for a in w) or "1": c for w, c in sorted(self.terms.items())}

    def __repr__(self) -> str:
        return f"UEAElement({len(self.terms)} terms, degree {self.degree})"


def words_of(elements: Iterable[UEAElement]) -> List[Word]:
    seen = set()
    for x in elements:
        seen.update(x.terms)
    return sorted(seen, key=lambda w: (len(w), w))


__all__ = ["Word", "PBWAlgebra", "UEAElement", "words_of"]
