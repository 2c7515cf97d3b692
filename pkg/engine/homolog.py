"""
Hom and Ext over a QuotientRing, and the trace machinery built on them.

Hom(F, N) for a free F of rank r is N^r; an element is stored as one column
of length n * r, block j holding the image of the j-th basis vector (entry
index j * n + a). Hom(M, N) and Ext^i(M, N) are then subquotients Z / W of
R^(n * r): Z is cut out by precomposition with the next differential, W is
spanned by the N-relations in every block plus the image of the previous
differential.
"""

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from engine.errors import (
    EngineDisagreement,
    GradingRequiredError,
    InvalidArgumentError,
    NotAnIdealError,
    NotASubmoduleError,
    NotGorensteinError,
    NotLocalError,
    ResourceCapExceeded,
    RingMismatchError,
)
from engine.fpmod import (
    Column,
    MatrixOverRing,
    PresentedModule,
    SubmoduleGB,
    column_degree,
    free_module,
    is_free,
    is_zero,
    kernel_columns,
    length,
    minimize_tracking,
    quotient,
    quotient_by_ideal,
    resolve,
    residue_field,
    submodule,
    syzygy,
    zero_module,
)
from engine.poly import Polynomial, QuotientRing
from utils.config import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomModule:
    """Hom_R(source, target) with one lift matrix (target.ngens x source.ngens) per generator"""

    carrier: PresentedModule
    lifts: Tuple[MatrixOverRing, ...]
    source: PresentedModule
    target: PresentedModule

    def is_zero(self) -> bool:
        return is_zero(self.carrier)

    def dimension(self) -> Optional[int]:
        return length(self.carrier)


@dataclass(frozen=True)
class TraceResult:
    trace: PresentedModule
    certifying_maps: Tuple[MatrixOverRing, ...]
    proper: bool

    @property
    def generators(self) -> List[Column]:
        return list(self.trace.embedding.columns)

    def to_dict(self) -> dict:
        if self.trace.is_ideal:
            gens = [str(g) for g in self.trace.ideal_generators]
        else:
            gens = [MatrixOverRing(self.trace.ring, len(c), [c]).render() for c in self.generators]
        return {"trace": gens, "proper": self.proper}


@dataclass(frozen=True)
class RigidityVerdict:
    ext1_dimension: Optional[int]
    rigid: bool
    free: bool

    def to_dict(self) -> dict:
        return {"rigid": self.rigid, "ext1_dim": self.ext1_dimension, "free": self.free}


@dataclass(frozen=True)
class TraceTriad:
    """The three conditions that never hold together for M inside X"""

    trace_module: bool
    hom_to_quotient_nonzero: bool
    rigid: bool

    @property
    def all_three(self) -> bool:
        return self.trace_module and self.hom_to_quotient_nonzero and self.rigid

    def to_dict(self) -> dict:
        return {
            "trace_module": self.trace_module,
            "hom_to_quotient_nonzero": self.hom_to_quotient_nonzero,
            "rigid": self.rigid,
        }


def _check_ring(M: PresentedModule, N: PresentedModule) -> QuotientRing:
    if M.ring != N.ring:
        raise RingMismatchError(f"{M.label or 'M'} and {N.label or 'N'} live over different rings")
    return M.ring


def _zero_column(R: QuotientRing, rank: int) -> List[Polynomial]:
    return [R.zero()] * rank


def _nonzero(col: Sequence[Polynomial]) -> bool:
    return any(not p.is_zero() for p in col)


# subquotients of N^r


def _coordinate_degrees(free_degrees, N: PresentedModule, r: int) -> Optional[Tuple[int, ...]]:
    if free_degrees is None or N.degrees is None or not N.ring.graded:
        return None
    return tuple(N.degrees[a] - free_degrees[j] for j in range(r) for a in range(N.ngens))


def _cocycles(N: PresentedModule, r: int, d_next: MatrixOverRing) -> List[Column]:
    """Maps F -> N (as columns of N^r) that vanish on the image of d_next : F' -> F"""
    R = N.ring
    n = N.ngens
    rank = n * r
    if rank == 0:
        return []
    r_next = d_next.ncols
    if r_next == 0:
        return [tuple(R.one() if i == k else R.zero() for i in range(rank)) for k in range(rank)]
    rows = n * r_next
    columns = []
    for j in range(r):
        for a in range(n):
            col = _zero_column(R, rows)
            for k in range(r_next):
                col[k * n + a] = d_next.entry(j, k)
            columns.append(col)
    for k in range(r_next):
        for rel in N.presentation.columns:
            col = _zero_column(R, rows)
            for i, p in enumerate(rel):
                col[k * n + i] = p
            columns.append(col)
    kernel = kernel_columns(R, columns, rows)
    return [col[:rank] for col in kernel if _nonzero(col[:rank])]


def _boundaries(N: PresentedModule, r: int, d_prev: Optional[MatrixOverRing]) -> List[Column]:
    """N-relations in every block plus the maps factoring through d_prev : F -> F''"""
    R = N.ring
    n = N.ngens
    rank = n * r
    cols = []
    for j in range(r):
        for rel in N.presentation.columns:
            col = _zero_column(R, rank)
            for i, p in enumerate(rel):
                col[j * n + i] = p
            cols.append(tuple(col))
    if d_prev is not None:
        for row in range(d_prev.nrows):
            for a in range(n):
                col = _zero_column(R, rank)
                for j in range(r):
                    col[j * n + a] = d_prev.entry(row, j)
                if _nonzero(col):
                    cols.append(tuple(col))
    return cols


def _subquotient(R: QuotientRing, cocycles: Sequence[Column], boundaries: Sequence[Column], rank: int,
                 coord_degrees, label: str) -> PresentedModule:
    s = len(cocycles)
    degrees = None
    if coord_degrees is not None:
        found = [column_degree(z, coord_degrees) for z in cocycles]
        if all(d is not None for d in found):
            degrees = tuple(found)
    relations = kernel_columns(R, list(cocycles) + list(boundaries), rank) if s else []
    relations = [col[:s] for col in relations if _nonzero(col[:s])]
    return PresentedModule(R, MatrixOverRing(R, s, relations, degrees), degrees, label=label)


def _minimize_if_possible(M: PresentedModule) -> Tuple[PresentedModule, List[int]]:
    try:
        return minimize_tracking(M)
    except GradingRequiredError:
        logger.warning("%s left unminimized: neither graded nor Artinian local", M.label)
        return M, list(range(M.ngens))


def _lift_matrix(R: QuotientRing, col: Column, n: int, r: int, degrees) -> MatrixOverRing:
    return MatrixOverRing(R, n, [col[j * n:(j + 1) * n] for j in range(r)], degrees)


# Hom and Ext


def hom_module(M: PresentedModule, N: PresentedModule) -> HomModule:
    """
    Hom_R(M, N) together with explicit lifts of its generators

    Args:
        M: source module
        N: target module over the same ring

    Returns:
        HomModule; each lift sends M's generators to elements of N
    """
    _check_ring(M, N)
    return _hom_cached(M, N)


@lru_cache(maxsize=512)
def _hom_cached(M: PresentedModule, N: PresentedModule) -> HomModule:
    R = M.ring
    r, n = M.ngens, N.ngens
    label = f"Hom({M.label or 'M'},{N.label or 'N'})"
    cocycles = _cocycles(N, r, M.presentation)
    boundaries = _boundaries(N, r, None)
    carrier = _subquotient(R, cocycles, boundaries, n * r, _coordinate_degrees(M.degrees, N, r), label)
    carrier, keep = _minimize_if_possible(carrier)
    lifts = tuple(_lift_matrix(R, cocycles[i], n, r, N.degrees) for i in keep)
    logger.debug("%s: %d generators", label, len(lifts))
    return HomModule(carrier, lifts, M, N)


def dual(M: PresentedModule) -> HomModule:
    """M* = Hom_R(M, R)"""
    return hom_module(M, free_module(M.ring, 1))


def _ext_parts(i: int, M: PresentedModule, N: PresentedModule):
    if i < 0:
        raise InvalidArgumentError(f"Ext is indexed by nonnegative integers, got {i}")
    R = _check_ring(M, N)
    res = resolve(M, i + 1)
    r = res.rank(i)
    n = N.ngens
    cocycles = _cocycles(N, r, res.differential(i + 1)) if r else []
    boundaries = _boundaries(N, r, res.differential(i) if i >= 1 else None) if r else []
    coord = _coordinate_degrees(res.free_degrees(i), N, r)
    return R, cocycles, boundaries, n * r, coord


def ext(i: int, M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """
    Ext^i_R(M, N) from the minimal resolution of M truncated at i + 1

    Args:
        i: homological degree
        M: module with a minimal resolution (graded, or over an Artinian local ring)
        N: target module

    Returns:
        Ext^i as a (minimized when possible) PresentedModule
    """
    R, cocycles, boundaries, rank, coord = _ext_parts(i, M, N)
    if not cocycles:
        return zero_module(R)
    module = _subquotient(R, cocycles, boundaries, rank, coord, f"Ext^{i}({M.label or 'M'},{N.label or 'N'})")
    return _minimize_if_possible(module)[0]


def ext_length(i: int, M: PresentedModule, N: PresentedModule) -> Optional[int]:
    """k-dimension of Ext^i(M, N), None when infinite"""
    R, cocycles, boundaries, rank, coord = _ext_parts(i, M, N)
    if not cocycles:
        return 0
    if R.is_artinian():
        outer = SubmoduleGB(R, boundaries, rank).quotient_length()
        inner = SubmoduleGB(R, list(cocycles) + list(boundaries), rank).quotient_length()
        return outer - inner
    return length(_subquotient(R, cocycles, boundaries, rank, coord, "Ext"))


def ext_is_zero(i: int, M: PresentedModule, N: PresentedModule) -> bool:
    R, cocycles, boundaries, rank, _ = _ext_parts(i, M, N)
    if not cocycles:
        return True
    gb = SubmoduleGB(R, boundaries, rank)
    return all(gb.contains(z) for z in cocycles)


# traces


def reduced_generators(R: QuotientRing, gens: Sequence[Polynomial]) -> List[Polynomial]:
    """Reduced Groebner basis in R of the ideal generated by ``gens``"""
    gb = SubmoduleGB(R, [[g] for g in gens], 1)
    out = []
    for vec in gb.basis:
        p = Polynomial.from_vector(R.base, vec, 0)
        if p == R.reduce(p):
            out.append(p)
    return out


def _prune(R: QuotientRing, cols: Sequence[Column], rank: int, relations: Sequence[Column]) -> List[Column]:
    alive = [tuple(c) for c in cols]
    for idx in range(len(alive) - 1, -1, -1):
        others = alive[:idx] + alive[idx + 1:] + list(relations)
        if SubmoduleGB(R, others, rank).contains(alive[idx]):
            alive.pop(idx)
    return alive


def _spans_everything(X: PresentedModule, cols: Sequence[Column]) -> bool:
    gb = SubmoduleGB(X.ring, list(cols) + list(X.presentation.columns), X.ngens)
    return gb.is_everything()


def _trace_from_images(X: PresentedModule, images: Sequence[Column], maps, label: str) -> TraceResult:
    R = X.ring
    if X.is_free_of_rank(1):
        gens = reduced_generators(R, [col[0] for col in images])
        trace = submodule(X, [[g] for g in gens], label=label)
        return TraceResult(trace, tuple(maps), not _spans_everything(X, trace.embedding.columns))
    relations = X.relation_basis()
    images = [c for c in images if not relations.contains(c)]
    images = _prune(R, images, X.ngens, X.presentation.columns)
    trace = submodule(X, images, label=label)
    return TraceResult(trace, tuple(maps), not _spans_everything(X, images))


def trace_in(M: PresentedModule, X: PresentedModule) -> TraceResult:
    """
    T_X(M), the sum of the images of all maps M -> X

    Args:
        M: source module
        X: ambient module (R itself for trace ideals)

    Returns:
        TraceResult; for X = R the trace is an ideal given by its reduced Groebner basis
    """
    H = hom_module(M, X)
    images = [col for lift in H.lifts for col in lift.columns if _nonzero(col)]
    label = f"T_{X.label or 'X'}({M.label or 'M'})"
    result = _trace_from_images(X, images, H.lifts, label)
    logger.debug("%s: proper=%s", label, result.proper)
    return result


def generates(M: PresentedModule, X: PresentedModule) -> bool:
    """M generates X iff T_X(M) = X"""
    return not trace_in(M, X).proper


def _left_kernel_trace(I: PresentedModule) -> TraceResult:
    R = I.ring
    P = I.presentation
    s = I.ngens
    X = I.ambient
    label = f"T_R({I.label or 'I'})"
    if s == 0:
        return _trace_from_images(X, [], (), label)
    rows = [tuple(P.entry(i, k) for k in range(P.ncols)) for i in range(s)]
    kernel = kernel_columns(R, rows, P.ncols)
    maps = tuple(MatrixOverRing.from_rows(R, [list(v)]) for v in kernel)
    images = [(p,) for v in kernel for p in v if not p.is_zero()]
    return _trace_from_images(X, images, maps, label)


def _hom_images_trace(I: PresentedModule) -> TraceResult:
    return trace_in(I, I.ambient)


_TRACE_METHODS = {"hom_images": _hom_images_trace, "left_kernel": _left_kernel_trace}


def trace_ideal(I: PresentedModule, method: str = "hom_images", cross_check: bool = True) -> TraceResult:
    """
    T_R(I) for an ideal presented with its embedding into R

    Args:
        I: ideal (PresentedModule tagged ideal_with_embedding)
        method: "hom_images" or "left_kernel" (entries of the left kernel of the presentation)
        cross_check: also run the other method and compare

    Returns:
        TraceResult whose trace carries the reduced Groebner basis of T_R(I)
    """
    if not I.is_ideal:
        raise NotAnIdealError(f"{I.label or 'module'} is not presented as an ideal")
    if method not in _TRACE_METHODS:
        raise InvalidArgumentError(f"unknown trace method {method!r}")
    result = _TRACE_METHODS[method](I)
    if cross_check:
        other_method = "left_kernel" if method == "hom_images" else "hom_images"
        other = _TRACE_METHODS[other_method](I)
        ours = result.trace.ideal_generators
        theirs = other.trace.ideal_generators
        if ours != theirs:
            raise EngineDisagreement(
                f"trace of {I}: {method} gives ({', '.join(map(str, ours))}) "
                f"but {other_method} gives ({', '.join(map(str, theirs))})"
            )
    return result


def _membership_basis(M: PresentedModule) -> SubmoduleGB:
    X = M.ambient
    return SubmoduleGB(M.ring, list(M.embedding.columns) + list(X.presentation.columns), X.ngens)


def is_trace_module(M: PresentedModule, X: PresentedModule) -> bool:
    """
    Decide M = T_X(M) for a submodule M of X, by two independent tests

    Args:
        M: submodule presented inside X
        X: ambient module

    Returns:
        True iff M is a trace module in X
    """
    if M.ambient is not X:
        raise NotASubmoduleError(f"{M.label or 'M'} is not presented inside {X.label or 'X'}")
    inside = _membership_basis(M)
    trace = trace_in(M, X).trace
    equal_to_trace = inside.same_as(_membership_basis(trace))
    lifts = hom_module(M, X).lifts
    images_inside = all(inside.contains(col) for lift in lifts for col in lift.columns)
    if equal_to_trace != images_inside:
        raise EngineDisagreement(
            f"trace test ({equal_to_trace}) and image test ({images_inside}) differ for {M.label or 'M'}"
        )
    return equal_to_trace


# ideals and invariants


def annihilator(M: PresentedModule) -> PresentedModule:
    """
    (0 :_R M) as an ideal, from one kernel computation

    Args:
        M: finitely presented module

    Returns:
        The annihilator with its reduced Groebner basis as generators
    """
    R = M.ring
    m = M.ngens
    label = f"Ann({M.label or 'M'})"
    ambient = free_module(R, 1)
    if m == 0:
        return submodule(ambient, [[R.one()]], label=label)
    rows = m * m
    unknown = _zero_column(R, rows)
    for i in range(m):
        unknown[i * m + i] = R.one()
    columns = [unknown]
    for i in range(m):
        for rel in M.presentation.columns:
            col = _zero_column(R, rows)
            for a, p in enumerate(rel):
                col[i * m + a] = p
            columns.append(col)
    kernel = kernel_columns(R, columns, rows)
    gens = reduced_generators(R, [col[0] for col in kernel if not col[0].is_zero()])
    return submodule(ambient, [[g] for g in gens], label=label)


def socle(M: PresentedModule) -> PresentedModule:
    """(0 :_M m) for the maximal ideal m generated by the variables"""
    R = M.ring
    if not R.is_local_setting():
        raise NotLocalError(f"socle needs a graded or Artinian local ring, got {R}")
    H = hom_module(residue_field(R), M)
    cols = [lift.columns[0] for lift in H.lifts if _nonzero(lift.columns[0])]
    return submodule(M, cols, label=f"soc({M.label or 'M'})")


def is_artinian_gorenstein(R: QuotientRing) -> bool:
    if not R.is_artinian_local():
        return False
    return length(socle(free_module(R, 1))) == 1


def grade(I: PresentedModule) -> int:
    """
    Least i with Ext^i(R/I, R) != 0

    Args:
        I: proper nonzero ideal over a graded or Artinian local ring

    Returns:
        grade of I; searching stops after nvars + 1 degrees
    """
    if not I.is_ideal:
        raise NotAnIdealError(f"{I.label or 'module'} is not presented as an ideal")
    R = I.ring
    gens = I.ideal_generators
    if not gens:
        raise NotAnIdealError("grade of the zero ideal is undefined")
    if _spans_everything(I.ambient, I.embedding.columns):
        raise NotAnIdealError("grade of the unit ideal is undefined")
    cyclic = quotient_by_ideal(R, gens, label=f"R/{I.label or 'I'}")
    target = free_module(R, 1)
    cap = R.nvars + 1
    for i in range(cap + 1):
        if not ext_is_zero(i, cyclic, target):
            return i
    raise ResourceCapExceeded(f"Ext^i(R/I, R) vanished for all i <= {cap}")


def conormal_dual(I: PresentedModule) -> PresentedModule:
    """
    Hom_{R/I}(I/I^2, R/I), cross-checked against Hom_R(I, R/I)

    Args:
        I: proper ideal

    Returns:
        The dual of the conormal module
    """
    if not I.is_ideal:
        raise NotAnIdealError(f"{I.label or 'module'} is not presented as an ideal")
    R = I.ring
    gens = I.ideal_generators
    if _spans_everything(I.ambient, I.embedding.columns):
        raise NotAnIdealError("the conormal module of the unit ideal is not defined")
    s = len(gens)
    relations = list(I.presentation.columns)
    for g in gens:
        for i in range(s):
            col = _zero_column(R, s)
            col[i] = g
            relations.append(tuple(col))
    conormal = PresentedModule(R, MatrixOverRing(R, s, relations, I.degrees), I.degrees,
                               label=f"{I.label or 'I'}/{I.label or 'I'}^2")
    cyclic = quotient_by_ideal(R, gens, label=f"R/{I.label or 'I'}")
    result = hom_module(conormal, cyclic)
    direct = hom_module(I, cyclic)
    ours, theirs = length(result.carrier), length(direct.carrier)
    if ours != theirs or result.is_zero() != direct.is_zero():
        raise EngineDisagreement(f"conormal dual of {I} has length {ours}, Hom(I, R/I) has length {theirs}")
    return result.carrier


def conormal_dual_vanishes(I: PresentedModule) -> bool:
    return is_zero(conormal_dual(I))


def cosyzygy(M: PresentedModule, n: int) -> PresentedModule:
    """
    Omega^(-n) M := (Omega^n (M*))* over an Artinian Gorenstein ring

    Args:
        M: finitely generated module
        n: positive integer

    Returns:
        The cosyzygy, well defined up to free summands
    """
    if n < 1:
        raise InvalidArgumentError(f"cosyzygy degree must be positive, got {n}")
    R = M.ring
    if not is_artinian_gorenstein(R):
        raise NotGorensteinError(f"cosyzygies need an Artinian Gorenstein ring, got {R}")
    first = dual(M).carrier
    shifted = syzygy(first, n)
    if is_zero(shifted):
        return zero_module(R)
    result = _minimize_if_possible(dual(shifted).carrier)[0]
    return PresentedModule(R, result.presentation, result.degrees, label=f"Omega^-{n}({M.label or 'M'})")


def betti_numbers(M: PresentedModule, upto: int) -> List[int]:
    res = resolve(M, max(upto, 1))
    return [res.rank(i) for i in range(upto + 1)]


def cosyzygy_round_trip_holds(M: PresentedModule, n: int = 1, upto: int = 3) -> bool:
    """Omega^n(Omega^-n M) matches M up to free summands, compared on Betti numbers past degree 0"""
    back = syzygy(cosyzygy(M, n), n)
    return betti_numbers(back, upto)[1:] == betti_numbers(M, upto)[1:]


def rigidity(M: PresentedModule) -> RigidityVerdict:
    """
    Rigidity verdict: Ext^1(M, M) = 0, with its dimension and the freeness flag

    Args:
        M: module with a minimal resolution

    Returns:
        RigidityVerdict (ext1_dimension is None when Ext^1 has infinite length)
    """
    ext1_dim = ext_length(1, M, M)
    rigid = ext_is_zero(1, M, M)
    free = is_free(M)
    if ext1_dim is not None and (ext1_dim == 0) != rigid:
        raise EngineDisagreement(f"Ext^1 of {M.label or 'M'} has dimension {ext1_dim} but rigid={rigid}")
    if free and not rigid:
        raise EngineDisagreement(f"{M.label or 'M'} is free yet Ext^1 does not vanish")
    return RigidityVerdict(ext1_dim, rigid, free)


# regular elements


def is_regular_on(a: Polynomial, N: PresentedModule) -> bool:
    """a is a nonzerodivisor on N"""
    R = N.ring
    a = R.reduce(a)
    n = N.ngens
    if n == 0:
        return True
    mult = [tuple(a if i == j else R.zero() for i in range(n)) for j in range(n)]
    kernel = kernel_columns(R, mult + list(N.presentation.columns), n)
    relations = N.relation_basis()
    return all(relations.contains(col[:n]) for col in kernel)


def contains_regular_element(I: PresentedModule, N: PresentedModule, attempts: int = 8) -> bool:
    """
    Whether the ideal I contains a nonzerodivisor on N

    Over a ring local at the origin a finite-length N has only the maximal
    ideal as associated prime, so I contains a regular element exactly when
    some generator has a nonzero constant term. Otherwise the generators and
    seeded random combinations of them are tried.
    """
    if not I.is_ideal:
        raise NotAnIdealError(f"{I.label or 'module'} is not presented as an ideal")
    R = I.ring
    if is_zero(N):
        return True
    gens = I.ideal_generators
    if not gens:
        return False
    if R.is_local_setting() and length(N) is not None and (R.is_artinian_local() or N.is_graded()):
        zero = R.field.zero()
        return any(R.reduce(g).constant_term() != zero for g in gens)
    if any(is_regular_on(g, N) for g in gens):
        return True
    rng = random.Random(get_settings().seed)
    field = R.field
    for _ in range(attempts):
        combo = R.zero()
        for g in gens:
            coeff = rng.randrange(1, 97) if not field.is_prime_field else rng.randrange(1, field.characteristic)
            combo = combo + g * R.base.constant(coeff)
        if is_regular_on(combo, N):
            return True
    logger.debug("no regular element found in %s after %d random combinations", I, attempts)
    return False


def trace_triad(M: PresentedModule, X: PresentedModule) -> TraceTriad:
    """Trace-module status, Hom(M, X/M) != 0 and rigidity for M inside X"""
    trace_module = is_trace_module(M, X)
    hom_nonzero = not hom_module(M, quotient(X, M)).is_zero()
    rigid = rigidity(M).rigid
    return TraceTriad(trace_module, hom_nonzero, rigid)
