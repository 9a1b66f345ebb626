"""Exact rational scalars and linear algebra over Q.

Matrices are numpy object arrays holding ``Fraction`` entries, so ``@`` and
elementwise arithmetic stay exact.  Vectors are 1-d object arrays.  Row
reduction and determinants go through sympy's DomainMatrix over QQ.
"""

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InconsistentSolve, ParseError


def parse_rational(value):
    """Parse ``"p/q"``, ``"p"`` or an int into a reduced Fraction."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ParseError(f"rationals must be written p/q, got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def format_rational(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def qarray(data):
    """Object array of Fractions from nested ints/Fractions/strings."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        flat[i] = parse_rational(x) if isinstance(x, str) else Fraction(x)
    return arr


def zeros(*shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def unit(n, i):
    out = zeros(n)
    out[i] = Fraction(1)
    return out


def is_exact(arr):
    arr = np.asarray(arr)
    return arr.dtype == object and all(isinstance(x, Fraction) for x in arr.reshape(-1))


def to_float(arr):
    return np.asarray(arr, dtype=float)


def _to_domain(matrix):
    rows, cols = matrix.shape
    data = [[QQ(int(x.numerator), int(x.denominator)) for x in (Fraction(v) for v in row)] for row in matrix]
    return DomainMatrix(data, (rows, cols), QQ)


def _from_domain(dm):
    rows, cols = dm.shape
    out = np.empty((rows, cols), dtype=object)
    for i, row in enumerate(dm.to_list()):
        for j, x in enumerate(row):
            out[i, j] = Fraction(int(x.numerator), int(x.denominator))
    return out


def rref(matrix):
    """Reduced row echelon form and pivot columns, exact."""
    m = np.asarray(matrix, dtype=object)
    if m.size == 0:
        return np.array(m, dtype=object, copy=True), []
    reduced, pivots = _to_domain(m).rref()
    return _from_domain(reduced), list(pivots)


def rank(matrix):
    matrix = np.asarray(matrix, dtype=object)
    if matrix.size == 0:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix):
    """Columns spanning the kernel, one per free variable (canonical basis)."""
    matrix = np.asarray(matrix, dtype=object)
    rows, cols = matrix.shape
    if rows == 0:
        return eye(cols)
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = Fraction(1)
        for r, p in enumerate(pivots):
            basis[p, k] = -reduced[r, f]
    return basis


def colspace(columns):
    """Reduced basis (as columns) of the span of the given columns."""
    columns = np.asarray(columns, dtype=object)
    if columns.size == 0:
        return zeros(columns.shape[0], 0)
    reduced, pivots = rref(columns.T)
    return np.array(reduced[: len(pivots)].T, dtype=object)


def solve(matrix, rhs):
    """One exact solution of ``matrix @ x = rhs`` with free variables set to 0.

    ``rhs`` may be a vector or a matrix of right-hand sides.  Raises
    InconsistentSolve when no solution exists.
    """
    matrix = np.asarray(matrix, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    vector = rhs.ndim == 1
    b = rhs.reshape(len(rhs), -1)
    rows, cols = matrix.shape
    aug = np.concatenate([matrix, b], axis=1)
    reduced, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        raise InconsistentSolve("linear system has no solution")
    x = zeros(cols, b.shape[1])
    for r, p in enumerate(pivots):
        x[p] = reduced[r, cols:]
    return x[:, 0] if vector else x


def inverse(matrix):
    matrix = np.asarray(matrix, dtype=object)
    n = matrix.shape[0]
    if rank(matrix) != n:
        raise ZeroDivisionError("singular matrix")
    return solve(matrix, eye(n))


def det(matrix):
    m = np.asarray(matrix, dtype=object)
    if m.shape[0] == 0:
        return Fraction(1)
    d = _to_domain(m).det()
    return Fraction(int(d.numerator), int(d.denominator))


def is_square(q):
    """Exact rational square root when |q| is a perfect square, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    num = _isqrt_exact(q.numerator)
    den = _isqrt_exact(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(n):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None
