"""
Buchberger's algorithm on sparse vectors of polynomials.

A vector in S^q is a dict ``{(component, monomial): coefficient}`` with raw
field coefficients. Terms are compared position-over-term: a smaller component
index is larger, ties broken by the monomial order. With this order every
basis element whose leading term sits in components >= m vanishes in the
components < m, which is what kernel computations rely on. Ideals are the
rank-one case.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from engine.arith import FieldSpec
from engine.errors import ResourceCapExceeded

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Term = Tuple[int, Monomial]
Vector = Dict[Term, object]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class TermOrder:
    """Position-over-term order on the terms of S^q"""

    def __init__(self, monomial_key: Callable[[Monomial], tuple]):
        self.monomial_key = monomial_key

    def key(self, term: Term):
        return (-term[0], self.monomial_key(term[1]))

    def leading(self, vec: Vector) -> Term:
        return max(vec, key=self.key)


def scale_shift(vec: Vector, coeff, mono: Monomial, field: FieldSpec) -> Vector:
    """coeff * mono * vec"""
    return {(c, mono_mul(m, mono)): field.mul(v, coeff) for (c, m), v in vec.items()}


def add_into(target: Vector, vec: Vector, coeff, mono: Monomial, field: FieldSpec):
    """target += coeff * mono * vec, in place"""
    for (c, m), v in vec.items():
        key = (c, mono_mul(m, mono))
        value = field.add(target.get(key, field.zero()), field.mul(v, coeff))
        if value == 0:
            target.pop(key, None)
        else:
            target[key] = value


class _Element:
    __slots__ = ("vec", "lt", "sugar")

    def __init__(self, vec: Vector, lt: Term, sugar: int):
        self.vec = vec
        self.lt = lt
        self.sugar = sugar


def _monic(vec: Vector, lt: Term, field: FieldSpec) -> Vector:
    lc = vec[lt]
    if lc == field.one():
        return vec
    inv = field.inv(lc)
    return {t: field.mul(v, inv) for t, v in vec.items()}


def _degree(vec: Vector) -> int:
    return max(sum(m) for _, m in vec)


class Reducer:
    """Normal forms with respect to a fixed list of monic vectors"""

    def __init__(self, elements: Sequence[Vector], field: FieldSpec, order: TermOrder):
        self.field = field
        self.order = order
        self._by_component: Dict[int, List[Tuple[Monomial, Vector]]] = {}
        for vec in elements:
            comp, mono = order.leading(vec)
            self._by_component.setdefault(comp, []).append((mono, vec))

    def add(self, vec: Vector):
        comp, mono = self.order.leading(vec)
        self._by_component.setdefault(comp, []).append((mono, vec))

    def find(self, term: Term) -> Optional[Tuple[Monomial, Vector]]:
        for mono, vec in self._by_component.get(term[0], ()):
            if mono_divides(mono, term[1]):
                return mono, vec
        return None

    def reduce(self, vec: Vector) -> Vector:
        field = self.field
        work = dict(vec)
        remainder: Vector = {}
        while work:
            term = self.order.leading(work)
            coeff = work[term]
            hit = self.find(term)
            if hit is None:
                remainder[term] = work.pop(term)
                continue
            mono, g = hit
            lc = g[(term[0], mono)]
            factor = field.neg(field.div(coeff, lc))
            add_into(work, g, factor, mono_div(term[1], mono), field)
            work.pop(term, None)
        return remainder


def groebner(vectors: Sequence[Vector], field: FieldSpec, order: TermOrder,
             max_degree: int, ideal_mode: bool = False) -> List[Vector]:
    """
    Reduced Groebner basis of the submodule generated by ``vectors``

    Args:
        vectors: generators (zero vectors are ignored)
        field: coefficient field
        order: term order on S^q
        max_degree: cap on the degree of any S-pair lcm
        ideal_mode: enables the coprime-leading-term criterion (rank one only)

    Returns:
        Monic reduced basis sorted by descending leading term
    """
    basis: List[_Element] = []
    reducer = Reducer([], field, order)
    pending = {}

    def insert(vec: Vector, sugar: int):
        lt = order.leading(vec)
        vec = _monic(vec, lt, field)
        k = len(basis)
        basis.append(_Element(vec, lt, sugar))
        reducer.add(vec)
        for i in range(k):
            other = basis[i]
            if other.lt[0] != lt[0]:
                continue
            lcm = mono_lcm(other.lt[1], lt[1])
            if ideal_mode and lcm == mono_mul(other.lt[1], lt[1]):
                continue
            pair_sugar = max(other.sugar + sum(lcm) - sum(other.lt[1]),
                             sugar + sum(lcm) - sum(lt[1]))
            pending[(i, k)] = (pair_sugar, lcm)

    for vec in vectors:
        if not vec:
            continue
        h = reducer.reduce(vec)
        if h:
            insert(h, _degree(vec))

    processed = 0
    while pending:
        (i, j), (sugar, lcm) = min(
            pending.items(),
            key=lambda item: (item[1][0], order.key((basis[item[0][0]].lt[0], item[1][1])), item[0]),
        )
        del pending[(i, j)]
        if sum(lcm) > max_degree:
            raise ResourceCapExceeded(f"Groebner pair degree {sum(lcm)} exceeds cap {max_degree}")
        comp = basis[i].lt[0]
        if _chain_criterion(basis, pending, i, j, comp, lcm):
            continue
        a, b = basis[i], basis[j]
        s: Vector = {}
        add_into(s, a.vec, field.one(), mono_div(lcm, a.lt[1]), field)
        add_into(s, b.vec, field.neg(field.one()), mono_div(lcm, b.lt[1]), field)
        h = reducer.reduce(s)
        processed += 1
        if h:
            insert(h, sugar)
    logger.debug("Buchberger: %d pairs reduced, %d basis elements", processed, len(basis))
    return _reduce_basis([e.vec for e in basis], field, order)


def _chain_criterion(basis, pending, i, j, comp, lcm) -> bool:
    for l, elem in enumerate(basis):
        if l in (i, j) or elem.lt[0] != comp:
            continue
        if not mono_divides(elem.lt[1], lcm):
            continue
        if _pair(i, l) in pending or _pair(j, l) in pending:
            continue
        return True
    return False


def _pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _reduce_basis(vectors: List[Vector], field: FieldSpec, order: TermOrder) -> List[Vector]:
    leads = [order.leading(v) for v in vectors]
    keep = []
    for idx, (comp, mono) in enumerate(leads):
        redundant = False
        for jdx, (c2, m2) in enumerate(leads):
            if jdx == idx or c2 != comp or not mono_divides(m2, mono):
                continue
            if m2 != mono or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append(idx)
    minimal = [vectors[i] for i in keep]
    reduced = []
    for idx, vec in enumerate(minimal):
        others = Reducer(minimal[:idx] + minimal[idx + 1:], field, order)
        r = others.reduce(vec)
        reduced.append(_monic(r, order.leading(r), field))
    reduced.sort(key=lambda v: order.key(order.leading(v)), reverse=True)
    return reduced
