"""Exact rational scalars, dense matrices and Gaussian elimination over Q.

Scalars are :class:`fractions.Fraction`. Matrices and tensors are numpy
arrays of ``dtype=object`` whose entries are Fractions, so every numpy
contraction (``@``, ``einsum``, ``tensordot``) stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def q(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float)):
        raise TypeError(f"refusing inexact scalar {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal notation not allowed for rationals: {text!r}")
    return Fraction(text)


def format_rational(value) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = q(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def zeros(*shape: int) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def identity(n: int) -> np.ndarray:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = ONE
    return m


def asq(data, shape: Optional[Sequence[int]] = None) -> np.ndarray:
    """Exact object array from nested lists (or an existing array)."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(tuple(shape))
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = q(v)
    return out


def vector(values: Iterable) -> np.ndarray:
    return asq(list(values)).reshape(-1)


def basis_vector(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = ONE
    return v


def is_zero(arr) -> bool:
    return all(x == 0 for x in np.asarray(arr, dtype=object).flat)


def normalize(arr) -> np.ndarray:
    """Replace any stray int entries (e.g. from einsum on empty axes) by Fractions."""
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = q(v)
    return out


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = normalize(m).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: np.ndarray) -> list[np.ndarray]:
    """Basis of the null space, one vector per free column in increasing order.

    Each vector has a 1 in its own free column and 0 in every other free
    column, so the result is unique for a given matrix.
    """
    m = np.asarray(m, dtype=object)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return [basis_vector(cols, j) for j in range(cols)]
    red, pivots = rref(m)
    free = [j for j in range(cols) if j not in set(pivots)]
    basis = []
    for fcol in free:
        v = zeros(cols)
        v[fcol] = ONE
        for row, pcol in enumerate(pivots):
            v[pcol] = -red[row, fcol]
        basis.append(v)
    return basis


def solve_linear(m: np.ndarray, rhs) -> Optional[tuple[np.ndarray, list[np.ndarray]]]:
    """Solve ``m @ s = rhs``.

    Returns None when rhs is outside the column space, otherwise the
    particular solution with all free variables set to zero, together with
    :func:`kernel_basis` of ``m``.
    """
    m = np.asarray(m, dtype=object)
    rhs = normalize(rhs).reshape(-1)
    rows, cols = m.shape
    if rhs.shape[0] != rows:
        raise ValueError(f"rhs has length {rhs.shape[0]}, matrix has {rows} rows")
    if rows == 0:
        return zeros(cols), kernel_basis(m)
    aug = np.concatenate([normalize(m), rhs.reshape(rows, 1)], axis=1)
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    sol = zeros(cols)
    for row, pcol in enumerate(pivots):
        sol[pcol] = red[row, cols]
    return sol, kernel_basis(m)


def coordinates(basis: Sequence[np.ndarray], v: np.ndarray) -> Optional[np.ndarray]:
    """Coordinates of v in the span of ``basis`` (None when v is outside it)."""
    v = normalize(v).reshape(-1)
    if not basis:
        return zeros(0) if is_zero(v) else None
    mat = np.stack([normalize(b).reshape(-1) for b in basis], axis=1)
    res = solve_linear(mat, v)
    if res is None:
        return None
    return res[0]


def to_lists(arr) -> list:
    """Nested lists of ``"p/q"`` strings."""
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return format_rational(arr.item())
    return [to_lists(sub) for sub in arr]
