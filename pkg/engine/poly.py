"""
Multivariate polynomials, monomial orders, reduced Groebner bases and
quotient rings R = k[x_1..x_n] / J with normal-form arithmetic.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import (
    parse_expr,
    standard_transformations,
    implicit_multiplication,
    convert_xor,
)

from engine.arith import FieldSpec, Scalar
from engine.errors import PolynomialSyntaxError, RingMismatchError, ZeroRingError, ResourceCapExceeded
from engine.groebner import (
    Monomial,
    Reducer,
    TermOrder,
    groebner,
    mono_divides,
    mono_mul,
)
from utils.config import get_settings

logger = logging.getLogger(__name__)

ORDER_KINDS = ("grevlex", "lex", "grlex")

_TRANSFORMS = standard_transformations + (implicit_multiplication, convert_xor)


@dataclass(frozen=True)
class MonomialOrder:
    """A global monomial order; ``precedence`` lists variable indices, most significant first"""

    kind: str = "grevlex"
    precedence: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order: {self.kind}")

    def key(self, mono: Monomial) -> tuple:
        exps = mono if self.precedence is None else tuple(mono[i] for i in self.precedence)
        if self.kind == "lex":
            return exps
        if self.kind == "grlex":
            return (sum(exps), exps)
        return (sum(exps), tuple(-e for e in reversed(exps)))

    def term_order(self) -> TermOrder:
        return TermOrder(self.key)


@dataclass(frozen=True)
class PolyRing:
    field: FieldSpec
    variables: Tuple[str, ...]
    order: MonomialOrder = MonomialOrder()
    weights: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not self.variables:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"variable names must be distinct: {self.variables}")
        if any(not v for v in self.variables):
            raise ValueError("variable names must be nonempty")
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(self.variables))
        if len(self.weights) != len(self.variables) or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        if self.order.precedence is not None and sorted(self.order.precedence) != list(range(len(self.variables))):
            raise ValueError("variable precedence must be a permutation")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): self.field.one()})

    def constant(self, value) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): self.field.canon(value)})

    def variable(self, name_or_index) -> "Polynomial":
        idx = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        mono = tuple(1 if i == idx else 0 for i in range(self.nvars))
        return Polynomial(self, {mono: self.field.one()})

    def monomial(self, mono: Monomial, coeff=None) -> "Polynomial":
        return Polynomial(self, {tuple(mono): self.field.one() if coeff is None else self.field.canon(coeff)})

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.field, self.variables, order, self.weights)

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def parse(self, text: str) -> "Polynomial":
        """
        Parse polynomial text such as "3*x^2*y - 1/2*y^3"

        Args:
            text: polynomial in this ring's variables ('*' optional, '^' or '**' powers)

        Returns:
            The parsed Polynomial
        """
        symbols = {name: Symbol(name) for name in self.variables}
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=_TRANSFORMS, evaluate=True)
        except Exception as e:
            raise PolynomialSyntaxError(f"cannot parse polynomial {text!r}: {e}")
        unknown = {str(s) for s in getattr(expr, "free_symbols", set())} - set(self.variables)
        if unknown:
            raise PolynomialSyntaxError(f"unknown variable(s) {sorted(unknown)} in {text!r}")
        try:
            poly = Poly(expr, *[symbols[v] for v in self.variables], domain="QQ")
        except Exception as e:
            raise PolynomialSyntaxError(f"{text!r} is not a polynomial: {e}")
        terms = {}
        for mono, coeff in poly.as_dict().items():
            value = self.field.canon(Fraction(int(coeff.p), int(coeff.q)))
            if value != 0:
                terms[tuple(int(e) for e in mono)] = value
        return Polynomial(self, terms)

    def __str__(self):
        names = ",".join(
            v if w == 1 else f"{v}:{w}" for v, w in zip(self.variables, self.weights)
        )
        return f"{self.field}[{names}]"


class Polynomial:
    """An immutable polynomial; coefficients are raw field values, never zero"""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, object]):
        self.ring = ring
        self._terms = {m: c for m, c in terms.items() if c != 0}
        self._hash = None

    # construction helpers

    @classmethod
    def from_vector(cls, ring: PolyRing, vec: dict, component: int = 0) -> "Polynomial":
        return cls(ring, {m: c for (comp, m), c in vec.items() if comp == component})

    def to_vector(self, component: int = 0) -> dict:
        return {(component, m): c for m, c in self._terms.items()}

    # inspection

    @property
    def terms(self) -> Dict[Monomial, object]:
        return self._terms

    def sorted_terms(self) -> List[Tuple[Monomial, object]]:
        key = self.ring.order.key
        return sorted(self._terms.items(), key=lambda item: key(item[0]), reverse=True)

    def coefficient(self, mono: Monomial) -> Scalar:
        return Scalar(self._terms.get(tuple(mono), 0), self.ring.field)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def constant_term(self):
        return self._terms.get(self.ring.one_monomial(), self.ring.field.zero())

    def leading_monomial(self) -> Monomial:
        return max(self._terms, key=self.ring.order.key)

    def leading_coefficient(self):
        return self._terms[self.leading_monomial()]

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def weighted_degrees(self) -> set:
        return {self.ring.weighted_degree(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.weighted_degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Weighted degree of a nonzero homogeneous polynomial, else None"""
        degrees = self.weighted_degrees()
        return next(iter(degrees)) if len(degrees) == 1 else None

    # arithmetic

    def _combine(self, other: "Polynomial", sign) -> "Polynomial":
        if other.ring != self.ring:
            raise RingMismatchError("polynomials live in different rings")
        f = self.ring.field
        out = dict(self._terms)
        for m, c in other._terms.items():
            value = f.add(out.get(m, f.zero()), f.mul(sign, c))
            if value == 0:
                out.pop(m, None)
            else:
                out[m] = value
        return Polynomial(self.ring, out)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, self.ring.field.one())

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, self.ring.field.neg(self.ring.field.one()))

    def __neg__(self) -> "Polynomial":
        f = self.ring.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        f = self.ring.field
        if not isinstance(other, Polynomial):
            c = f.canon(other.value if isinstance(other, Scalar) else other)
            return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self._terms.items()})
        if other.ring != self.ring:
            raise RingMismatchError("polynomials live in different rings")
        out: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = f.add(out.get(m, f.zero()), f.mul(c1, c2))
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        field = self.ring.field
        out = ""
        for mono, coeff in self.sorted_terms():
            negative = not field.is_prime_field and coeff < 0
            magnitude = -coeff if negative else coeff
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.variables, mono) if e
            ]
            if not factors:
                text = field.render(magnitude)
            elif magnitude == 1:
                text = "*".join(factors)
            else:
                text = field.render(magnitude) + "*" + "*".join(factors)
            if not out:
                out = "-" + text if negative else text
            else:
                out += (" - " if negative else " + ") + text
        return out

    def __repr__(self):
        return f"Polynomial({self})"


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True

    @cached_property
    def _reducer(self) -> Reducer:
        if not self.generators:
            return None
        ring = self.generators[0].ring
        return Reducer([g.to_vector() for g in self.generators], ring.field, self.order.term_order())

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial() for g in self.generators]

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def groebner_basis(gens: Sequence[Polynomial], order: Optional[MonomialOrder] = None,
                   ring: Optional[PolyRing] = None) -> GroebnerBasis:
    """
    Reduced Groebner basis of the ideal generated by ``gens``

    Args:
        gens: generators in one PolyRing (may be empty, giving the zero ideal)
        order: monomial order (defaults to the ring's order)
        ring: required only when ``gens`` is empty

    Returns:
        GroebnerBasis with monic, inter-reduced generators
    """
    gens = list(gens)
    if not gens:
        return GroebnerBasis((), order or (ring.order if ring else MonomialOrder()))
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise RingMismatchError("generators live in different rings")
    order = order or ring.order
    target = ring.with_order(order)
    vectors = groebner(
        [g.to_vector() for g in gens],
        ring.field,
        order.term_order(),
        get_settings().max_degree,
        ideal_mode=True,
    )
    return GroebnerBasis(tuple(Polynomial.from_vector(target, v) for v in vectors), order)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if not G.generators:
        return f
    if G.generators[0].ring.variables != f.ring.variables:
        raise RingMismatchError("polynomial and basis live in different rings")
    return Polynomial.from_vector(f.ring, G._reducer.reduce(f.to_vector()))


def ideal_equal(A: GroebnerBasis, B: GroebnerBasis) -> bool:
    if A.order != B.order:
        raise RingMismatchError("bases computed for different monomial orders")
    return len(A.generators) == len(B.generators) and all(
        a.terms == b.terms for a, b in zip(A.generators, B.generators)
    )


class QuotientRing:
    """R = base / defining_ideal, elements represented by normal forms"""

    def __init__(self, base: PolyRing, defining_ideal: GroebnerBasis):
        self.base = base
        self.defining_ideal = defining_ideal
        self.graded = all(g.is_homogeneous() for g in defining_ideal.generators)

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def nvars(self) -> int:
        return self.base.nvars

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.base.variables

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and self.base == other.base
            and ideal_equal(self.defining_ideal, other.defining_ideal)
        )

    def __hash__(self):
        return hash((self.base, tuple(self.defining_ideal.generators)))

    def __str__(self):
        if not self.defining_ideal.generators:
            return str(self.base)
        return f"{self.base}/({', '.join(str(g) for g in self.defining_ideal.generators)})"

    # elements

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.defining_ideal)

    def element(self, text_or_poly) -> Polynomial:
        if isinstance(text_or_poly, Polynomial):
            return self.reduce(text_or_poly)
        return self.reduce(self.base.parse(str(text_or_poly)))

    def zero(self) -> Polynomial:
        return self.base.zero()

    def one(self) -> Polynomial:
        return self.base.one()

    def variable(self, name_or_index) -> Polynomial:
        return self.reduce(self.base.variable(name_or_index))

    def generators_of_maximal_ideal(self) -> List[Polynomial]:
        return [self.variable(i) for i in range(self.nvars)]

    def multiply(self, a: Polynomial, b: Polynomial) -> Polynomial:
        return self.reduce(a * b)

    def is_unit_constant(self, a: Polynomial) -> bool:
        return a.is_constant() and not a.is_zero()

    # finiteness

    def ideal_vectors(self, rank: int) -> List[dict]:
        """Generators of J * R^rank as vectors, used by every module computation"""
        return [g.to_vector(c) for c in range(rank) for g in self.defining_ideal.generators]

    @cached_property
    def standard_monomials(self) -> Optional[List[Monomial]]:
        """Monomials outside the leading ideal, ascending; None if infinitely many"""
        return staircase(self.defining_ideal.leading_monomials(), self.nvars, get_settings().dim_cap * 64)

    def dimension(self) -> Optional[int]:
        basis = self.standard_monomials
        return None if basis is None else len(basis)

    def is_artinian(self) -> bool:
        return self.standard_monomials is not None

    def is_artinian_local(self) -> bool:
        """Artinian with every variable nilpotent, i.e. local at the origin"""
        dim = self.dimension()
        if dim is None:
            return False
        return all(self.reduce(self.base.variable(i) ** dim).is_zero() for i in range(self.nvars))

    def is_local_setting(self) -> bool:
        return self.graded or self.is_artinian_local()


def staircase(leading: Iterable[Monomial], nvars: int, cap: int) -> Optional[List[Monomial]]:
    """
    Standard monomials of a monomial ideal given by its leading monomials

    Args:
        leading: generators of the monomial ideal
        nvars: number of variables
        cap: abort with ResourceCapExceeded beyond this many monomials

    Returns:
        Ascending list of standard monomials, or None when there are infinitely many
    """
    leading = list(leading)
    for i in range(nvars):
        pure = any(all(e == 0 for j, e in enumerate(m) if j != i) for m in leading)
        if not pure:
            return None
    one = (0,) * nvars
    if any(mono_divides(m, one) for m in leading):
        return []
    found = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for mono in frontier:
            for i in range(nvars):
                cand = tuple(e + 1 if j == i else e for j, e in enumerate(mono))
                if cand in found or any(mono_divides(m, cand) for m in leading):
                    continue
                found.add(cand)
                nxt.append(cand)
                if len(found) > cap:
                    raise ResourceCapExceeded(f"more than {cap} standard monomials")
        frontier = nxt
    return sorted(found, key=lambda m: (sum(m), tuple(-e for e in m)))


def quotient_ring(base: PolyRing, defining: Sequence[Polynomial] = ()) -> QuotientRing:
    """
    Build R = base / (defining)

    Args:
        base: ambient polynomial ring
        defining: generators of the defining ideal

    Returns:
        QuotientRing with the reduced defining basis and the graded flag set
    """
    G = groebner_basis(list(defining), base.order, ring=base)
    if G.is_unit_ideal():
        raise ZeroRingError(f"zero ring: defining ideal of {base} contains 1")
    ring = QuotientRing(base, G)
    logger.debug("quotient ring %s, graded=%s", ring, ring.graded)
    return ring


def ring_multiply(a: Polynomial, b: Polynomial, R: QuotientRing) -> Polynomial:
    return R.multiply(a, b)


def is_zerodivisor(a: Polynomial, R: QuotientRing, degree_cap: Optional[int] = None) -> bool:
    """
    Decide whether ``a`` kills some nonzero element of R, via the ideal quotient (0 : a)

    Args:
        a: element of R in normal form
        R: the quotient ring
        degree_cap: overrides the Buchberger degree cap for this call

    Returns:
        True iff (0 : a) is nonzero
    """
    from engine.fpmod import MatrixOverRing, syzygy_matrix
    from utils.config import override_settings

    a = R.reduce(a)
    if a.is_zero():
        return True
    with override_settings(max_degree=degree_cap):
        kernel = syzygy_matrix(MatrixOverRing.from_rows(R, [[a]]))
    return kernel.ncols > 0
