"""
Finitely presented modules over a QuotientRing.

A module is the cokernel of a presentation matrix whose columns are relations
among the generators. Every kernel is computed by one Groebner basis in
S^(rows + cols) under a position-over-term order (see engine.groebner), with
the defining ideal J of R added in every target component.

Minimal presentations and resolutions need a local setting: either a graded
ring with a homogeneous presentation, or an Artinian ring local at the origin.
In both cases a generating set is minimal iff no member lies in the span of
the others, so minimization is a greedy deletion with membership tests.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from engine.errors import GradingRequiredError, InvalidArgumentError, NotASubmoduleError, RingMismatchError
from engine.groebner import Reducer, groebner, mono_divides
from engine.poly import Polynomial, QuotientRing, staircase
from utils.config import get_settings

logger = logging.getLogger(__name__)

Column = Tuple[Polynomial, ...]


class MatrixOverRing:
    """A matrix of normal forms, stored by columns, with optional degree shifts"""

    def __init__(self, ring: QuotientRing, nrows: int, columns: Sequence[Sequence[Polynomial]],
                 row_degrees: Optional[Sequence[int]] = None):
        self.ring = ring
        self.nrows = nrows
        self.columns: Tuple[Column, ...] = tuple(tuple(ring.reduce(p) for p in col) for col in columns)
        if any(len(col) != nrows for col in self.columns):
            raise ValueError("every column must have one entry per row")
        self.row_degrees = tuple(row_degrees) if row_degrees is not None else None
        self.col_degrees = self._infer_column_degrees()

    @classmethod
    def from_rows(cls, ring: QuotientRing, rows: Sequence[Sequence[Polynomial]],
                  row_degrees: Optional[Sequence[int]] = None) -> "MatrixOverRing":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, nrows, [[rows[i][j] for i in range(nrows)] for j in range(ncols)], row_degrees)

    @classmethod
    def zero(cls, ring: QuotientRing, nrows: int, ncols: int = 0, row_degrees=None) -> "MatrixOverRing":
        return cls(ring, nrows, [[ring.zero()] * nrows for _ in range(ncols)], row_degrees)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j][i]

    def rows(self) -> List[List[Polynomial]]:
        return [[col[i] for col in self.columns] for i in range(self.nrows)]

    def transpose(self) -> "MatrixOverRing":
        return MatrixOverRing.from_rows(self.ring, [list(col) for col in self.columns])

    def is_zero(self) -> bool:
        return all(p.is_zero() for col in self.columns for p in col)

    def has_unit_entry(self) -> bool:
        return any(p.constant_term() != 0 for col in self.columns for p in col)

    def select_columns(self, indices: Sequence[int]) -> "MatrixOverRing":
        return MatrixOverRing(self.ring, self.nrows, [self.columns[j] for j in indices], self.row_degrees)

    def multiply(self, other: "MatrixOverRing") -> "MatrixOverRing":
        if self.ncols != other.nrows:
            raise ValueError("matrix shapes do not compose")
        R = self.ring
        cols = []
        for col in other.columns:
            out = [R.zero()] * self.nrows
            for j, coeff in enumerate(col):
                if coeff.is_zero():
                    continue
                for i in range(self.nrows):
                    out[i] = out[i] + self.columns[j][i] * coeff
            cols.append(out)
        return MatrixOverRing(R, self.nrows, cols, self.row_degrees)

    def _infer_column_degrees(self) -> Optional[Tuple[Optional[int], ...]]:
        if self.row_degrees is None or not self.ring.graded:
            return None
        degrees = []
        for col in self.columns:
            degrees.append(column_degree(col, self.row_degrees))
        return tuple(degrees)

    def is_homogeneous(self) -> bool:
        if self.row_degrees is None or not self.ring.graded:
            return False
        for col in self.columns:
            try:
                column_degree(col, self.row_degrees, strict=True)
            except ValueError:
                return False
        return True

    def render(self) -> str:
        body = "[" + ", ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.rows()) + "]"
        if self.col_degrees is not None and self.ncols:
            body += " deg:[" + ", ".join("?" if d is None else str(d) for d in self.col_degrees) + "]"
        return body

    def __repr__(self):
        return f"MatrixOverRing({self.nrows}x{self.ncols}, {self.render()})"


def column_degree(col: Sequence[Polynomial], row_degrees: Sequence[int], strict: bool = False) -> Optional[int]:
    """Degree of a column under the row shifts; None for a zero or inhomogeneous column"""
    found = set()
    for p, shift in zip(col, row_degrees):
        if p.is_zero():
            continue
        d = p.degree()
        if d is None:
            if strict:
                raise ValueError("inhomogeneous entry")
            return None
        found.add(d + shift)
    if len(found) > 1:
        if strict:
            raise ValueError("column mixes degrees")
        return None
    return next(iter(found)) if found else None


def _column_vector(col: Sequence[Polynomial], offset: int = 0) -> dict:
    vec = {}
    for i, p in enumerate(col):
        vec.update(p.to_vector(offset + i))
    return vec


def _unit_column(ring: QuotientRing, rank: int, index: int) -> Column:
    return tuple(ring.one() if i == index else ring.zero() for i in range(rank))


class SubmoduleGB:
    """Groebner basis of a submodule of R^rank (the J-multiples of each basis vector included)"""

    def __init__(self, ring: QuotientRing, columns: Sequence[Sequence[Polynomial]], rank: int):
        self.ring = ring
        self.rank = rank
        order = ring.base.order.term_order()
        vectors = [_column_vector(col) for col in columns] + ring.ideal_vectors(rank)
        self.basis = groebner(vectors, ring.field, order, get_settings().max_degree) if rank else []
        self._reducer = Reducer(self.basis, ring.field, order)
        self._order = order

    def reduce(self, col: Sequence[Polynomial]) -> Column:
        vec = self._reducer.reduce(_column_vector(col))
        return tuple(Polynomial.from_vector(self.ring.base, vec, i) for i in range(self.rank))

    def contains(self, col: Sequence[Polynomial]) -> bool:
        return not self._reducer.reduce(_column_vector(col))

    def leading_by_component(self) -> List[list]:
        leads = [[] for _ in range(self.rank)]
        for vec in self.basis:
            comp, mono = self._order.leading(vec)
            leads[comp].append(mono)
        return leads

    def quotient_length(self) -> Optional[int]:
        """k-dimension of R^rank / submodule, None if infinite"""
        total = 0
        cap = get_settings().dim_cap * 64
        for leads in self.leading_by_component():
            basis = staircase(leads, self.ring.nvars, cap)
            if basis is None:
                return None
            total += len(basis)
        return total

    def is_everything(self) -> bool:
        one = self.ring.base.one_monomial()
        return all(one in leads for leads in self.leading_by_component())

    def same_as(self, other: "SubmoduleGB") -> bool:
        return self.rank == other.rank and self.basis == other.basis


def kernel_columns(ring: QuotientRing, columns: Sequence[Sequence[Polynomial]], nrows: int) -> List[Column]:
    """
    Generators of the kernel of R^s -> R^nrows given by ``columns``

    Args:
        ring: the quotient ring R
        columns: the s images of the basis vectors
        nrows: rank of the target

    Returns:
        Kernel generators as columns of length s (normal forms, nonzero)
    """
    s = len(columns)
    if s == 0:
        return []
    if nrows == 0:
        return [_unit_column(ring, s, j) for j in range(s)]
    one = ring.base.one_monomial()
    field = ring.field
    vectors = []
    for j, col in enumerate(columns):
        vec = _column_vector(col)
        vec[(nrows + j, one)] = field.one()
        vectors.append(vec)
    vectors += ring.ideal_vectors(nrows)
    order = ring.base.order.term_order()
    basis = groebner(vectors, field, order, get_settings().max_degree)
    kernel = []
    for vec in basis:
        if order.leading(vec)[0] < nrows:
            continue
        col = tuple(ring.reduce(Polynomial.from_vector(ring.base, vec, nrows + j)) for j in range(s))
        if any(not p.is_zero() for p in col):
            kernel.append(col)
    logger.debug("kernel of %dx%d map: %d generators", nrows, s, len(kernel))
    return kernel


def minimal_columns(ring: QuotientRing, columns: Sequence[Sequence[Polynomial]], rank: int,
                    row_degrees: Optional[Sequence[int]] = None) -> List[Column]:
    """Greedy deletion of columns lying in the span of the remaining ones"""
    cols = [tuple(c) for c in columns if any(not p.is_zero() for p in c)]
    if len(cols) <= 1:
        return cols

    def priority(idx):
        col = cols[idx]
        if row_degrees is not None and ring.graded:
            d = column_degree(col, row_degrees)
            if d is not None:
                return (d,)
        return (max(p.total_degree() for p in col),)

    alive = list(range(len(cols)))
    for idx in sorted(range(len(cols)), key=priority, reverse=True):
        others = [cols[j] for j in alive if j != idx]
        if not others:
            continue
        if SubmoduleGB(ring, others, rank).contains(cols[idx]):
            alive.remove(idx)
    return [cols[j] for j in alive]


@dataclass(frozen=True, eq=False)
class PresentedModule:
    """
    coker(presentation) over ``ring``.

    When ``ambient`` is set, ``embedding`` (ambient.ngens x ngens) sends the
    generators into the ambient module and the module is identified with its
    image there; an ideal is the case ambient = R.
    """

    ring: QuotientRing
    presentation: MatrixOverRing
    degrees: Optional[Tuple[int, ...]] = None
    ambient: Optional["PresentedModule"] = None
    embedding: Optional[MatrixOverRing] = None
    label: str = ""

    @property
    def ngens(self) -> int:
        return self.presentation.nrows

    @property
    def tag(self) -> str:
        return "ideal_with_embedding" if self.is_ideal else "plain"

    @property
    def is_ideal(self) -> bool:
        return self.ambient is not None and self.ambient.is_free_of_rank(1)

    @property
    def ideal_generators(self) -> List[Polynomial]:
        if not self.is_ideal:
            raise NotASubmoduleError("module carries no embedding into R")
        return list(self.embedding.rows()[0]) if self.ngens else []

    def is_free_of_rank(self, r: int) -> bool:
        return self.ngens == r and self.presentation.ncols == 0 and self.ambient is None

    def is_graded(self) -> bool:
        if not self.ring.graded or self.degrees is None:
            return False
        return self.presentation.is_homogeneous()

    def relation_basis(self) -> SubmoduleGB:
        return SubmoduleGB(self.ring, self.presentation.columns, self.ngens)

    def __str__(self):
        name = self.label or "M"
        if self.is_ideal:
            return f"{name} = ({', '.join(str(g) for g in self.ideal_generators)})"
        return f"{name} = coker {self.presentation.render()}"


def free_module(R: QuotientRing, rank: int, degrees: Optional[Sequence[int]] = None) -> PresentedModule:
    if degrees is None and R.graded:
        degrees = (0,) * rank
    degrees = tuple(degrees) if degrees is not None else None
    return PresentedModule(R, MatrixOverRing.zero(R, rank, 0, degrees), degrees, label=f"R^{rank}")


def zero_module(R: QuotientRing) -> PresentedModule:
    return PresentedModule(R, MatrixOverRing.zero(R, 0, 0, () if R.graded else None),
                           () if R.graded else None, label="0")


def _homogeneous_degrees(gens: Sequence[Polynomial]) -> Optional[Tuple[int, ...]]:
    degrees = [g.degree() for g in gens]
    return None if any(d is None for d in degrees) else tuple(degrees)


def submodule(X: PresentedModule, gens: Sequence[Sequence[Polynomial]], label: str = "") -> PresentedModule:
    """
    The submodule of X generated by ``gens`` (columns in X's generators)

    Args:
        X: ambient module
        gens: generator columns of length X.ngens
        label: display name

    Returns:
        PresentedModule with ambient X and the generators as embedding
    """
    R = X.ring
    gens = [tuple(R.reduce(p) for p in col) for col in gens]
    if any(len(col) != X.ngens for col in gens):
        raise NotASubmoduleError("generator columns must have one entry per ambient generator")
    s = len(gens)
    degrees = None
    if X.degrees is not None and R.graded:
        found = [column_degree(col, X.degrees) for col in gens]
        if all(d is not None for d in found):
            degrees = tuple(found)
    relations = kernel_columns(R, list(gens) + list(X.presentation.columns), X.ngens)
    relations = [col[:s] for col in relations if any(not p.is_zero() for p in col[:s])]
    presentation = MatrixOverRing(R, s, relations, degrees)
    embedding = MatrixOverRing(R, X.ngens, gens, X.degrees)
    return PresentedModule(R, presentation, degrees, ambient=X, embedding=embedding, label=label)


def present_ideal(gens: Sequence[Polynomial], R: QuotientRing, label: str = "I") -> PresentedModule:
    """
    Present the ideal generated by ``gens`` with its embedding into R

    Args:
        gens: ring elements (zero generators are dropped)
        R: the quotient ring

    Returns:
        PresentedModule tagged ideal_with_embedding; no generators means the zero ideal
    """
    reduced = [R.reduce(g) for g in gens]
    nonzero = [g for g in reduced if not g.is_zero()]
    if len(nonzero) < len(reduced):
        logger.warning("dropping %d zero generator(s) of %s", len(reduced) - len(nonzero), label)
    if not nonzero:
        logger.warning("%s is the zero ideal", label)
    return submodule(free_module(R, 1), [[g] for g in nonzero], label=label)


def ideal_basis(I: PresentedModule) -> SubmoduleGB:
    """Groebner basis of an ideal inside R^1"""
    return SubmoduleGB(I.ring, [[g] for g in I.ideal_generators], 1)


def quotient_by_ideal(R: QuotientRing, gens: Sequence[Polynomial], label: str = "R/I") -> PresentedModule:
    gens = [R.reduce(g) for g in gens]
    degrees = (0,) if R.graded else None
    return PresentedModule(R, MatrixOverRing(R, 1, [[g] for g in gens if not g.is_zero()], degrees),
                           degrees, label=label)


def residue_field(R: QuotientRing) -> PresentedModule:
    return quotient_by_ideal(R, R.generators_of_maximal_ideal(), label="k")


def quotient(X: PresentedModule, M: PresentedModule, label: str = "") -> PresentedModule:
    """X / M for a submodule M of X"""
    if M.ambient is not X:
        raise NotASubmoduleError("M is not presented inside X")
    R = X.ring
    cols = list(X.presentation.columns) + list(M.embedding.columns)
    return PresentedModule(R, MatrixOverRing(R, X.ngens, cols, X.degrees), X.degrees,
                           label=label or f"{X.label}/{M.label}")


def direct_sum(M: PresentedModule, N: PresentedModule) -> PresentedModule:
    R = _same_ring(M, N)
    m, n = M.ngens, N.ngens
    cols = [tuple(col) + (R.zero(),) * n for col in M.presentation.columns]
    cols += [(R.zero(),) * m + tuple(col) for col in N.presentation.columns]
    degrees = M.degrees + N.degrees if M.degrees is not None and N.degrees is not None else None
    return PresentedModule(R, MatrixOverRing(R, m + n, cols, degrees), degrees,
                           label=f"{M.label or 'M'}+{N.label or 'N'}")


def tensor(M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """M (x) N presented on the generators e_i (x) f_j, index i * n + j"""
    R = _same_ring(M, N)
    m, n = M.ngens, N.ngens
    cols = []
    for col in M.presentation.columns:
        for j in range(n):
            out = [R.zero()] * (m * n)
            for i, p in enumerate(col):
                out[i * n + j] = p
            cols.append(out)
    for col in N.presentation.columns:
        for i in range(m):
            out = [R.zero()] * (m * n)
            for j, p in enumerate(col):
                out[i * n + j] = p
            cols.append(out)
    degrees = None
    if M.degrees is not None and N.degrees is not None:
        degrees = tuple(a + b for a in M.degrees for b in N.degrees)
    return PresentedModule(R, MatrixOverRing(R, m * n, cols, degrees), degrees)


def _same_ring(M: PresentedModule, N: PresentedModule) -> QuotientRing:
    if M.ring != N.ring:
        raise RingMismatchError("modules live over different rings")
    return M.ring


# invariants


def length(M: PresentedModule) -> Optional[int]:
    """k-dimension of M, None when infinite"""
    if M.ngens == 0:
        return 0
    return M.relation_basis().quotient_length()


def is_zero(M: PresentedModule) -> bool:
    return M.ngens == 0 or M.relation_basis().is_everything()


def require_local_setting(M: PresentedModule):
    if M.ring.is_artinian_local():
        return
    if M.is_graded():
        return
    raise GradingRequiredError("minimal resolution requires grading")


def minimize(M: PresentedModule) -> PresentedModule:
    """
    Minimal presentation of M: minimal generators and minimal relations

    Args:
        M: a graded module over a graded ring, or any module over an Artinian local ring

    Returns:
        An isomorphic PresentedModule (same ambient, restricted embedding)
    """
    return minimize_tracking(M)[0]


def minimize_tracking(M: PresentedModule) -> Tuple[PresentedModule, List[int]]:
    """minimize, also returning the indices of the surviving generators"""
    require_local_setting(M)
    R = M.ring
    m = M.ngens
    units = [_unit_column(R, m, i) for i in range(m)]
    relations = list(M.presentation.columns)

    def priority(i):
        return (M.degrees[i] if M.degrees is not None else 0, i)

    keep = list(range(m))
    for i in sorted(range(m), key=priority, reverse=True):
        others = [units[j] for j in keep if j != i] + relations
        if SubmoduleGB(R, others, m).contains(units[i]):
            keep.remove(i)
    k = len(keep)
    if k < m:
        kernel = kernel_columns(R, [units[j] for j in keep] + relations, m)
        relations = [col[:k] for col in kernel]
    degrees = tuple(M.degrees[j] for j in keep) if M.degrees is not None else None
    relations = minimal_columns(R, relations, k, degrees)
    presentation = MatrixOverRing(R, k, relations, degrees)
    embedding = M.embedding.select_columns(keep) if M.embedding is not None else None
    return PresentedModule(R, presentation, degrees, M.ambient, embedding, M.label), keep


def minimal_generators(M: PresentedModule) -> int:
    return minimize(M).ngens


def is_free(M: PresentedModule) -> bool:
    return minimize(M).presentation.ncols == 0


def syzygy_matrix(A: MatrixOverRing) -> MatrixOverRing:
    """Columns generating the kernel of A viewed as a map of free modules"""
    kernel = kernel_columns(A.ring, A.columns, A.nrows)
    row_degrees = None
    if A.col_degrees is not None and all(d is not None for d in A.col_degrees):
        row_degrees = A.col_degrees
    return MatrixOverRing(A.ring, A.ncols, kernel, row_degrees)


@dataclass(frozen=True)
class FreeResolution:
    """
    Differentials d_1, d_2, ... with d_i : F_i -> F_{i-1}.

    ``complete`` means the resolution terminated: F_i = 0 beyond ``ranks``.
    """

    ring: QuotientRing
    differentials: Tuple[MatrixOverRing, ...]
    ranks: Tuple[int, ...]
    degrees: Tuple[Optional[Tuple[int, ...]], ...]
    minimal: bool
    complete: bool

    def rank(self, i: int) -> int:
        if i < len(self.ranks):
            return self.ranks[i]
        if self.complete:
            return 0
        raise ValueError(f"resolution computed only up to F_{len(self.ranks) - 1}")

    def free_degrees(self, i: int) -> Optional[Tuple[int, ...]]:
        if i < len(self.degrees):
            return self.degrees[i]
        return () if self.complete else None

    def differential(self, i: int) -> MatrixOverRing:
        if i < 1:
            raise ValueError("differentials are indexed from 1")
        if i <= len(self.differentials):
            return self.differentials[i - 1]
        target = self.rank(i - 1)
        return MatrixOverRing.zero(self.ring, target, self.rank(i), self.free_degrees(i - 1))

    @property
    def length(self) -> int:
        return len(self.differentials)


def resolve(M: PresentedModule, length: int) -> FreeResolution:
    """
    Minimal free resolution of M up to homological degree ``length``

    Args:
        M: graded module over a graded ring, or a module over an Artinian local ring
        length: number of differentials wanted (>= 1)

    Returns:
        FreeResolution with minimal = True
    """
    if length < 1:
        raise InvalidArgumentError(f"resolution length must be at least 1, got {length}")
    return _resolve_cached(M, length)


@lru_cache(maxsize=512)
def _resolve_cached(M: PresentedModule, length: int) -> FreeResolution:
    R = M.ring
    base = minimize(M)
    ranks = [base.ngens]
    degrees = [base.degrees]
    differentials = []
    current = base.presentation
    complete = current.ncols == 0
    if not complete:
        differentials.append(current)
        ranks.append(current.ncols)
        degrees.append(_column_degrees(current))
    while not complete and len(differentials) < length:
        kernel = kernel_columns(R, current.columns, current.nrows)
        row_degrees = degrees[-1]
        kernel = minimal_columns(R, kernel, current.ncols, row_degrees)
        if not kernel:
            complete = True
            break
        current = MatrixOverRing(R, current.ncols, kernel, row_degrees)
        differentials.append(current)
        ranks.append(current.ncols)
        degrees.append(_column_degrees(current))
    logger.debug("resolution ranks %s (complete=%s)", ranks, complete)
    return FreeResolution(R, tuple(differentials), tuple(ranks), tuple(degrees), True, complete)


def _column_degrees(A: MatrixOverRing) -> Optional[Tuple[int, ...]]:
    if A.col_degrees is None or any(d is None for d in A.col_degrees):
        return None
    return A.col_degrees


def syzygy(M: PresentedModule, n: int) -> PresentedModule:
    """
    Omega^n M, the image of d_n presented by d_{n+1}; Omega^0 M = M

    Args:
        M: as for resolve
        n: nonnegative homological degree

    Returns:
        The syzygy module (zero module when the resolution stopped earlier)
    """
    if n < 0:
        raise InvalidArgumentError(f"syzygy degree must be nonnegative, got {n}; use cosyzygy for negative degrees")
    if n == 0:
        return M
    res = resolve(M, n + 1)
    R = M.ring
    if res.rank(n) == 0:
        return zero_module(R)
    ambient = free_module(R, res.rank(n - 1), res.free_degrees(n - 1))
    label = f"Omega^{n}({M.label or 'M'})"
    return PresentedModule(R, res.differential(n + 1), res.free_degrees(n), ambient,
                           res.differential(n), label)


def graded_dimension(M: PresentedModule, degree: int) -> int:
    """k-dimension of the degree-``degree`` piece of a graded module"""
    if not M.is_graded():
        raise GradingRequiredError("graded pieces need a homogeneous presentation")
    if M.ngens == 0:
        return 0
    leads = M.relation_basis().leading_by_component()
    weights = M.ring.base.weights
    total = 0
    for comp, shift in enumerate(M.degrees):
        for mono in _monomials_of_degree(weights, degree - shift):
            if not any(mono_divides(lead, mono) for lead in leads[comp]):
                total += 1
    return total


def _monomials_of_degree(weights: Sequence[int], target: int):
    if target < 0:
        return
    if not weights:
        if target == 0:
            yield ()
        return
    w = weights[0]
    for e in range(target // w + 1):
        for rest in _monomials_of_degree(weights[1:], target - e * w):
            yield (e,) + rest
