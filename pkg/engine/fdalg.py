"""
Artinian quotient rings as finite-dimensional algebras, and their modules as
explicit representations. Everything here is plain linear algebra on numpy
arrays (engine.linalg) and never touches a Groebner basis beyond the normal
forms used to build structure constants, which makes it an independent check
on engine.homolog.
"""

import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from engine import linalg
from engine.errors import NotArtinianError, ResourceCapExceeded, RingMismatchError, EngineDisagreement
from engine.groebner import Monomial, mono_divides
from engine.poly import Polynomial, QuotientRing
from utils.config import get_settings

logger = logging.getLogger(__name__)

ENUMERATION_MODES = ("monomial_exhaustive", "random")

# associativity is checked on every basis triple up to this dimension
_FULL_AXIOM_CHECK_DIM = 16


class FiniteAlgebra:
    """R = S/J with finitely many standard monomials, given by structure constants"""

    def __init__(self, ring: QuotientRing):
        basis = ring.standard_monomials
        if basis is None:
            raise NotArtinianError(f"ring not Artinian: {ring} has infinitely many standard monomials")
        self.ring = ring
        self.field = ring.field
        key = ring.base.order.key
        self.basis: Tuple[Monomial, ...] = tuple(sorted(basis, key=key))
        self.dimension = len(self.basis)
        self._index = {mono: i for i, mono in enumerate(self.basis)}
        self.unit_index = self._index[ring.base.one_monomial()]
        d = self.dimension
        self.structure_constants = np.stack([
            np.stack([self.coordinates(ring.reduce(self.basis_element(a) * self.basis_element(b)))
                      for b in range(d)])
            for a in range(d)
        ])
        self.variable_matrices = tuple(self.multiplication_matrix(ring.variable(i)) for i in range(ring.nvars))
        self._verify_axioms()

    def basis_element(self, index: int) -> Polynomial:
        return self.ring.base.monomial(self.basis[index])

    def coordinates(self, f: Polynomial) -> np.ndarray:
        """Coordinate vector of an element of R (reduced first)"""
        f = self.ring.reduce(f)
        vec = linalg.zeros((1, self.dimension), self.field)[0]
        for mono, coeff in f.terms.items():
            vec[self._index[mono]] = coeff
        return vec

    def element(self, vec: Sequence) -> Polynomial:
        terms = {self.basis[i]: self.field.canon(c) for i, c in enumerate(vec) if c != 0}
        return Polynomial(self.ring.base, terms)

    def multiplication_matrix(self, f: Polynomial) -> np.ndarray:
        """Matrix of x -> f * x; column b holds the coordinates of f * basis_b"""
        cols = [self.coordinates(f * self.basis_element(b)) for b in range(self.dimension)]
        if not cols:
            return linalg.zeros((0, 0), self.field)
        return np.stack(cols, axis=1)

    @cached_property
    def is_local(self) -> bool:
        return self.ring.is_artinian_local()

    def maximal_ideal_indices(self) -> List[int]:
        return [i for i in range(self.dimension) if i != self.unit_index]

    def _verify_axioms(self):
        c = self.structure_constants
        d = self.dimension
        field = self.field
        if d == 0:
            return
        for a in range(d):
            if not np.array_equal(c[a, self.unit_index], self.coordinates(self.basis_element(a))):
                raise EngineDisagreement(f"unit does not act as identity on {self.basis[a]}")
            for b in range(a + 1, d):
                if not np.array_equal(c[a, b], c[b, a]):
                    raise EngineDisagreement("structure constants are not commutative")
        triples = range(d) if d <= _FULL_AXIOM_CHECK_DIM else [self._index[m] for m in self.basis if sum(m) == 1]
        for a in triples:
            la = self.left_matrix(a)
            for b in range(d):
                lb = self.left_matrix(b)
                ab = self._left_of_vector(c[a, b])
                if not np.array_equal(linalg.matmul(la, lb, field), ab):
                    raise EngineDisagreement(f"structure constants not associative at {self.basis[a]}, {self.basis[b]}")

    def left_matrix(self, a: int) -> np.ndarray:
        """Multiplication by basis_a, read off the structure constants"""
        return self.structure_constants[a].T.copy()

    def _left_of_vector(self, vec: np.ndarray) -> np.ndarray:
        out = linalg.zeros((self.dimension, self.dimension), self.field)
        for e, coeff in enumerate(vec):
            if coeff != 0:
                out = linalg.add(out, linalg.scale(self.left_matrix(e), coeff, self.field), self.field)
        return out

    def __repr__(self):
        return f"FiniteAlgebra({self.ring}, dim={self.dimension})"


def algebraize(R: QuotientRing) -> FiniteAlgebra:
    """
    The finite-dimensional algebra of an Artinian quotient ring

    Args:
        R: quotient ring with finitely many standard monomials

    Returns:
        FiniteAlgebra with verified structure constants
    """
    A = FiniteAlgebra(R)
    logger.debug("algebraized %s: dimension %d", R, A.dimension)
    return A


@dataclass(eq=False)
class FDModule:
    """
    A representation of a FiniteAlgebra: one action matrix per variable.

    ``span`` is the subspace (rows, reduced) of the ambient representation the
    module was cut from, when it was built as a submodule; ideals also keep
    their generators as ring elements in ``ideal_generators``.
    """

    algebra: FiniteAlgebra
    variable_actions: Tuple[np.ndarray, ...]
    generators: List[np.ndarray] = dc_field(default_factory=list)
    label: str = ""
    span: Optional[np.ndarray] = None
    ideal_generators: Optional[List[Polynomial]] = None

    def __post_init__(self):
        self._verify()

    @property
    def dimension(self) -> int:
        return self.variable_actions[0].shape[0]

    @property
    def field(self):
        return self.algebra.field

    def action(self, f: Polynomial) -> np.ndarray:
        """Matrix of multiplication by a ring element"""
        field = self.field
        d = self.dimension
        out = linalg.zeros((d, d), field)
        for mono, coeff in self.algebra.ring.reduce(f).terms.items():
            term = linalg.identity(d, field)
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = linalg.matmul(self.variable_actions[i], term, field)
            out = linalg.add(out, linalg.scale(term, coeff, field), field)
        return out

    @cached_property
    def actions(self) -> Tuple[np.ndarray, ...]:
        """Action matrix of every algebra basis element, in basis order"""
        return tuple(self.action(self.algebra.basis_element(i)) for i in range(self.algebra.dimension))

    def _verify(self):
        field = self.field
        mats = self.variable_actions
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if not np.array_equal(linalg.matmul(mats[i], mats[j], field), linalg.matmul(mats[j], mats[i], field)):
                    raise EngineDisagreement("variable actions do not commute")
        for g in self.algebra.ring.defining_ideal.generators:
            if not linalg.is_zero(self.action(g)):
                raise EngineDisagreement(f"defining relation {g} does not act as zero")

    # subquotients

    def closure(self, vectors: Sequence[np.ndarray]) -> Tuple[np.ndarray, List[int]]:
        """Reduced basis of the submodule generated by ``vectors``"""
        field = self.field
        d = self.dimension
        if not vectors:
            return linalg.zeros((0, d), field), []
        spanning = [linalg.matmul(act, np.asarray(v).reshape(d, 1), field).reshape(d)
                    for v in vectors for act in self.actions]
        return linalg.row_space(np.stack(spanning), field)

    def restrict(self, basis: np.ndarray, pivots: Sequence[int], label: str = "") -> "FDModule":
        """The submodule with the given reduced basis (which must be closed under the action)"""
        field = self.field
        k = basis.shape[0]
        actions = []
        for mat in self.variable_actions:
            image = linalg.matmul(mat, basis.T, field)
            sub = image[list(pivots), :] if k else linalg.zeros((0, 0), field)
            actions.append(sub)
        gens = [row for row in linalg.identity(k, field)]
        return FDModule(self.algebra, tuple(actions), gens, label, span=basis)

    def quotient(self, basis: np.ndarray, pivots: Sequence[int], label: str = "") -> "FDModule":
        """This module modulo the submodule with the given reduced basis"""
        field = self.field
        d = self.dimension
        keep = [j for j in range(d) if j not in pivots]
        unit = linalg.identity(d, field)
        actions = []
        for mat in self.variable_actions:
            cols = []
            for j in keep:
                image = linalg.matmul(mat, unit[:, [j]], field).reshape(d)
                cols.append(linalg.reduce_against(image, basis, pivots, field)[keep])
            actions.append(np.stack(cols, axis=1) if cols else linalg.zeros((0, 0), field))
        gens = []
        for g in self.generators:
            gens.append(linalg.reduce_against(np.asarray(g), basis, pivots, field)[keep])
        return FDModule(self.algebra, tuple(actions), gens, label)


def free_fd_module(A: FiniteAlgebra, rank: int, label: str = "") -> FDModule:
    field = A.field
    d = A.dimension
    actions = []
    for mat in A.variable_matrices:
        block = linalg.zeros((d * rank, d * rank), field)
        for i in range(rank):
            block[i * d:(i + 1) * d, i * d:(i + 1) * d] = mat
        actions.append(block)
    gens = []
    for i in range(rank):
        g = linalg.zeros((1, d * rank), field)[0]
        g[i * d + A.unit_index] = field.one()
        gens.append(g)
    return FDModule(A, tuple(actions), gens, label or f"R^{rank}")


def regular_module(A: FiniteAlgebra) -> FDModule:
    return free_fd_module(A, 1, label="R")


def ideal_module(A: FiniteAlgebra, gens: Sequence[Polynomial], label: str = "I") -> FDModule:
    """The ideal generated by ``gens`` as a submodule of the regular representation"""
    R = regular_module(A)
    basis, pivots = R.closure([A.coordinates(g) for g in gens])
    module = R.restrict(basis, pivots, label)
    module.ideal_generators = [A.ring.reduce(g) for g in gens]
    return module


def quotient_module(A: FiniteAlgebra, gens: Sequence[Polynomial], label: str = "R/I") -> FDModule:
    R = regular_module(A)
    basis, pivots = R.closure([A.coordinates(g) for g in gens])
    return R.quotient(basis, pivots, label)


def residue_module(A: FiniteAlgebra) -> FDModule:
    return quotient_module(A, A.ring.generators_of_maximal_ideal(), label="k")


def from_presented(A: FiniteAlgebra, M) -> FDModule:
    """The representation of coker(P) for a PresentedModule M over A's ring"""
    if M.ring != A.ring:
        raise RingMismatchError("module and algebra live over different rings")
    m = M.ngens
    d = A.dimension
    F = free_fd_module(A, m)
    vectors = []
    for col in M.presentation.columns:
        vec = linalg.zeros((1, d * m), A.field)[0]
        for i, p in enumerate(col):
            vec[i * d:(i + 1) * d] = A.coordinates(p)
        vectors.append(vec)
    basis, pivots = F.closure(vectors)
    return F.quotient(basis, pivots, M.label or "M")


# homomorphisms


@dataclass(frozen=True)
class HomSpace:
    dimension: int
    maps: Tuple[np.ndarray, ...]


def _same_algebra(M: FDModule, N: FDModule):
    if M.algebra is not N.algebra and M.algebra.ring != N.algebra.ring:
        raise RingMismatchError("modules over different algebras")


def fd_hom(M: FDModule, N: FDModule) -> HomSpace:
    """
    Module maps M -> N as the null space of F A_M(x) = A_N(x) F over all variables

    Args:
        M: source representation
        N: target representation over the same algebra

    Returns:
        HomSpace with an explicit basis of (dim N x dim M) matrices
    """
    _same_algebra(M, N)
    field = M.field
    dm, dn = M.dimension, N.dimension
    if dm == 0 or dn == 0:
        return HomSpace(0, ())
    blocks = []
    for am, an in zip(M.variable_actions, N.variable_actions):
        right = linalg.kron(am.T.copy(), linalg.identity(dn, field), field)
        left = linalg.kron(linalg.identity(dm, field), an, field)
        blocks.append(linalg.sub(right, left, field))
    constraints = np.concatenate(blocks, axis=0) if blocks else linalg.zeros((0, dm * dn), field)
    null = linalg.nullspace(constraints, field)
    maps = tuple(v.reshape(dm, dn).T.copy() for v in null)
    return HomSpace(len(maps), maps)


def minimal_cover_generators(M: FDModule) -> List[np.ndarray]:
    """Vectors completing a basis of m*M to one of M (all basis vectors off the local case)"""
    field = M.field
    d = M.dimension
    unit = linalg.identity(d, field)
    if not M.algebra.is_local:
        return [row for row in unit]
    images = [linalg.matmul(mat, unit, field).T for mat in M.variable_actions]
    stacked = np.concatenate(images, axis=0) if images else linalg.zeros((0, d), field)
    basis, pivots = linalg.row_space(stacked, field)
    gens = []
    for j in range(d):
        candidate = np.concatenate([basis, unit[[j]]], axis=0) if basis.shape[0] else unit[[j]]
        reduced, new_pivots = linalg.row_space(candidate, field)
        if len(new_pivots) > len(pivots):
            gens.append(unit[j])
            basis, pivots = reduced, new_pivots
    return gens


def fd_ext1(M: FDModule, N: FDModule) -> int:
    """
    dim Ext^1(M, N) from 0 -> K -> R^r -> M -> 0:
    dim Hom(K, N) - r dim N + dim Hom(M, N)
    """
    _same_algebra(M, N)
    A = M.algebra
    field = M.field
    gens = minimal_cover_generators(M)
    r = len(gens)
    if r == 0:
        return 0
    F = free_fd_module(A, r)
    cols = []
    for g in gens:
        for act in M.actions:
            cols.append(linalg.matmul(act, np.asarray(g).reshape(-1, 1), field).reshape(-1))
    cover = np.stack(cols, axis=1)
    # free basis ordered (generator, algebra basis) matches free_fd_module's blocks
    kernel = linalg.nullspace(cover, field)
    basis, pivots = linalg.row_space(kernel, field)
    K = F.restrict(basis, pivots, "K")
    return fd_hom(K, N).dimension - r * N.dimension + fd_hom(M, N).dimension


def fd_trace(M: FDModule, X: FDModule) -> Tuple[np.ndarray, List[int]]:
    """Reduced basis of T_X(M), the span of the images of all maps M -> X"""
    field = X.field
    images = [col for phi in fd_hom(M, X).maps for col in phi.T]
    if not images:
        return linalg.zeros((0, X.dimension), field), []
    return linalg.row_space(np.stack(images), field)


def fd_socle_dim(M: FDModule) -> int:
    d = M.dimension
    if d == 0:
        return 0
    if not M.variable_actions:
        return d
    stacked = np.concatenate(M.variable_actions, axis=0)
    return d - linalg.rank(stacked, M.field)


def fd_length(M: FDModule) -> int:
    return M.dimension


# enumeration


def _check_cap(A: FiniteAlgebra):
    cap = get_settings().dim_cap
    if A.dimension > cap:
        raise ResourceCapExceeded(f"algebra dimension {A.dimension} exceeds cap {cap}")


def _minimal_monomials(monos: Sequence[Monomial]) -> List[Monomial]:
    return [m for m in monos if not any(o != m and mono_divides(o, m) for o in monos)]


def enumerate_ideals(A: FiniteAlgebra, mode: str = "monomial_exhaustive", seed: int = 0,
                     count: int = 10) -> Iterator[FDModule]:
    """
    Stream ideals of A as submodules of the regular representation

    Args:
        A: Artinian algebra
        mode: "monomial_exhaustive" (all monomial ideals, zero and unit ideal included)
            or "random" (``count`` ideals from seeded batches of random elements of m)
        seed: numpy seed for random mode
        count: number of ideals in random mode

    Returns:
        Iterator of FDModule ideals carrying their generators
    """
    if mode not in ENUMERATION_MODES:
        raise ValueError(f"unknown enumeration mode {mode!r}")
    _check_cap(A)
    if mode == "monomial_exhaustive":
        yield from _monomial_ideals(A)
    else:
        yield from _random_ideals(A, seed, count)


def _monomial_ideals(A: FiniteAlgebra) -> Iterator[FDModule]:
    R = regular_module(A)
    field = A.field
    seen: Dict[tuple, Tuple[Monomial, ...]] = {}
    frontier: List[Tuple[Monomial, ...]] = [()]
    seen[linalg.span_key(linalg.zeros((0, A.dimension), field), field)] = ()
    while frontier:
        nxt = []
        for gens in frontier:
            for mono in A.basis:
                if mono in gens:
                    continue
                candidate = tuple(sorted(gens + (mono,), key=A.ring.base.order.key))
                basis, _ = R.closure([A.coordinates(A.ring.base.monomial(m)) for m in candidate])
                key = linalg.span_key(basis, field)
                if key in seen:
                    continue
                inside = [A.basis[i] for i in range(A.dimension)
                          if any(row[i] != 0 for row in basis)]
                seen[key] = tuple(_minimal_monomials(inside))
                nxt.append(candidate)
        frontier = nxt
    ideals = sorted(seen.values(), key=lambda gens: (_ideal_dim(A, gens), [A.ring.base.order.key(m) for m in gens]))
    logger.debug("%d monomial ideals in %s", len(ideals), A.ring)
    for gens in ideals:
        polys = [A.ring.base.monomial(m) for m in gens]
        yield ideal_module(A, polys, label="(" + ", ".join(str(p) for p in polys) + ")")


def _ideal_dim(A: FiniteAlgebra, gens: Sequence[Monomial]) -> int:
    return sum(1 for m in A.basis if any(mono_divides(g, m) for g in gens))


def _random_ideals(A: FiniteAlgebra, seed: int, count: int) -> Iterator[FDModule]:
    rng = np.random.default_rng(seed)
    field = A.field
    maximal = A.maximal_ideal_indices()
    memo: Dict[tuple, FDModule] = {}
    if not maximal:
        return
    for _ in range(count):
        size = min(int(rng.integers(1, 3)), len(maximal))
        chosen: List[np.ndarray] = []
        while len(chosen) < size:
            vec = linalg.zeros((1, A.dimension), field)[0]
            for i in maximal:
                if field.is_prime_field:
                    vec[i] = int(rng.integers(0, field.characteristic))
                else:
                    vec[i] = field.canon(int(rng.integers(-3, 4)))
            if linalg.is_zero(vec):
                continue
            if chosen and linalg.rank(np.stack(chosen + [vec]), field) == len(chosen):
                continue
            chosen.append(vec)
        polys = [A.element(v) for v in chosen]
        key = linalg.span_key(regular_module(A).closure(chosen)[0], field)
        if key not in memo:
            memo[key] = ideal_module(A, polys, label="(" + ", ".join(str(p) for p in polys) + ")")
        yield memo[key]
