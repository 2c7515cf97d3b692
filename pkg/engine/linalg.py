"""
Exact dense linear algebra on numpy arrays.

F_p matrices are int64 arrays of residues; Q matrices are object arrays of
Fraction. Row reduction keeps every entry canonical so that reduced row
echelon forms can be compared and hashed directly.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from engine.arith import FieldSpec

# below this characteristic int64 dot products cannot overflow at desk-scale sizes
_INT64_SAFE_PRIME = 2 ** 20


def dtype_for(field: FieldSpec):
    return np.int64 if field.is_prime_field else object


def array(rows: Sequence[Sequence], field: FieldSpec, ncols: int = 0) -> np.ndarray:
    """Matrix from nested rows of raw field values"""
    rows = [[field.canon(v) for v in row] for row in rows]
    if not rows:
        return zeros((0, ncols), field)
    return np.array(rows, dtype=dtype_for(field))


def zeros(shape: Tuple[int, int], field: FieldSpec) -> np.ndarray:
    if field.is_prime_field:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int, field: FieldSpec) -> np.ndarray:
    out = zeros((n, n), field)
    for i in range(n):
        out[i, i] = field.one()
    return out


def matmul(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    if not field.is_prime_field:
        if A.shape[1] == 0:
            return zeros((A.shape[0], B.shape[1]), field)
        return A @ B
    p = field.characteristic
    if p < _INT64_SAFE_PRIME:
        return (A @ B) % p
    return ((A.astype(object) @ B.astype(object)) % p).astype(np.int64)


def add(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    if field.is_prime_field:
        return (A + B) % field.characteristic
    return A + B


def sub(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    if field.is_prime_field:
        return (A - B) % field.characteristic
    return A - B


def scale(A: np.ndarray, c, field: FieldSpec) -> np.ndarray:
    if field.is_prime_field:
        return (A * int(c)) % field.characteristic
    return A * Fraction(c)


def kron(A: np.ndarray, B: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Kronecker product, built from an outer product so object arrays work too"""
    m, n = A.shape
    p, q = B.shape
    outer = np.multiply.outer(A.astype(object), B.astype(object))
    out = outer.transpose(0, 2, 1, 3).reshape(m * p, n * q)
    if field.is_prime_field:
        return (out % field.characteristic).astype(np.int64)
    return out


def is_zero(A: np.ndarray) -> bool:
    return not np.any(A != 0)


def rref(A: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form

    Args:
        A: matrix over ``field``
        field: coefficient field

    Returns:
        (R, pivots): the nonzero rows of the reduced form and their pivot columns
    """
    R = A.copy()
    nrows, ncols = R.shape
    pivots = []
    row = 0
    prime = field.is_prime_field
    p = field.characteristic
    for col in range(ncols):
        if row >= nrows:
            break
        hits = np.nonzero(R[row:, col] != 0)[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        inv = field.inv(field.canon(R[row, col]))
        R[row] = (R[row] * inv) % p if prime else R[row] * inv
        for other in range(nrows):
            if other == row or R[other, col] == 0:
                continue
            factor = R[other, col]
            if prime:
                R[other] = (R[other] - int(factor) * R[row]) % p
            else:
                R[other] = R[other] - factor * R[row]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def rank(A: np.ndarray, field: FieldSpec) -> int:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(rref(A, field)[1])


def nullspace(A: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Basis of {v : A v = 0}, one vector per row"""
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return identity(ncols, field)
    R, pivots = rref(A, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = zeros((len(free), ncols), field)
    for k, f in enumerate(free):
        basis[k, f] = field.one()
        for i, pc in enumerate(pivots):
            basis[k, pc] = field.neg(field.canon(R[i, f]))
    return basis


def row_space(vectors: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, List[int]]:
    """Reduced basis of the span of the rows"""
    if vectors.shape[0] == 0:
        return vectors, []
    return rref(vectors, field)


def span_key(vectors: np.ndarray, field: FieldSpec) -> tuple:
    """Hashable canonical form of a row span"""
    R, _ = row_space(vectors, field)
    return tuple(tuple(field.canon(v) for v in row) for row in R)


def reduce_against(v: np.ndarray, basis: np.ndarray, pivots: Sequence[int], field: FieldSpec) -> np.ndarray:
    """Remainder of v modulo a reduced row basis"""
    out = v.copy()
    for row, pc in zip(basis, pivots):
        c = out[pc]
        if c != 0:
            out = sub(out, scale(row, c, field), field)
    return out
