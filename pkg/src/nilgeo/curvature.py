"""Levi-Civita connection, curvature and its traces, all exact."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rational as q
from .algebra import j_adapted
from .errors import DegenerateCenter, DependentVectors

HALF = Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """``nabla[i, j]`` holds the coordinates of the covariant derivative of b_j along b_i."""

    nabla: np.ndarray

    def operator(self, i):
        """Matrix of y -> nabla_{b_i} y (column convention)."""
        return self.nabla[i].T

    def apply(self, x, y):
        return np.tensordot(x, np.tensordot(y, self.nabla, axes=([0], [1])), axes=([0], [0]))


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """``R[i, j, k]`` holds the coordinates of R(b_i, b_j) b_k."""

    R: np.ndarray

    def apply(self, x, y, w):
        t = np.tensordot(x, self.R, axes=([0], [0]))
        t = np.tensordot(y, t, axes=([0], [0]))
        return np.tensordot(w, t, axes=([0], [0]))

    def is_zero(self):
        return all(v == 0 for v in self.R.reshape(-1))


def connection_table(A):
    n = A.dim
    nabla = q.zeros(n, n, n) if A.exact else np.zeros((n, n, n))
    half = HALF if A.exact else 0.5
    daggers = [A.ad_dagger(A.basis_vector(i)) for i in range(n)]
    for i in range(n):
        for j in range(n):
            nabla[i, j] = half * (A.bracket[i, j] - daggers[i][:, j] - daggers[j][:, i])
    return ConnectionTable(nabla)


def curvature(A, table=None):
    """R(b_i,b_j) = G_i G_j - G_j G_i - sum_k c_ij^k G_k with G_i the matrix of nabla_{b_i}."""
    table = table or connection_table(A)
    n = A.dim
    ops = np.stack([table.operator(i) for i in range(n)])
    R = q.zeros(n, n, n, n) if A.exact else np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m = ops[i] @ ops[j] - ops[j] @ ops[i] - np.tensordot(A.bracket[i, j], ops, axes=([0], [0]))
            R[i, j] = m.T
            R[j, i] = -m.T
    return CurvatureTensor(R)


@dataclass(frozen=True)
class Sectional:
    numerator: Fraction
    value: Fraction | None


def sectional(A, x, y, tensor=None):
    x, y = A.vector(x), A.vector(y)
    if q.rank(np.stack([x, y])) < 2:
        raise DependentVectors("sectional curvature needs two independent vectors")
    tensor = tensor or curvature(A)
    num = A.inner(tensor.apply(x, y, y), x)
    den = A.inner(x, x) * A.inner(y, y) - A.inner(x, y) ** 2
    return Sectional(num, num / den if den != 0 else None)


def ricci(A, tensor=None):
    """Ric(b_i, b_j) = trace of xi -> R(xi, b_i) b_j."""
    tensor = tensor or curvature(A)
    return np.einsum("kijk->ij", tensor.R)


def scalar_curvature(A, tensor=None):
    ric = ricci(A, tensor)
    return Fraction(np.sum(A.gram_inverse * ric.T))


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    is_flat: bool
    e0f_sufficient: bool
    ricci: np.ndarray
    scalar: Fraction
    homaloidal_center: bool


def flatness_report(A, D, tensor=None):
    tensor = tensor or curvature(A)
    n = A.dim
    brackets_in_U = True
    for i in range(n):
        for j in range(i + 1, n):
            y = D.to_adapted(A.bracket[i, j])
            if any(v != 0 for v in y[D.k :]):
                brackets_in_U = False
    e0f = brackets_in_U and D.s == 0
    # numerators <R(x,y)y,x> with x, y central, polarized over the center basis
    C = [D.basis[:, i] for i in range(D.k + D.r)]
    m = len(C)
    T = {
        (a, b, c, d): A.inner(tensor.apply(C[a], C[b], C[c]), C[d])
        for a in range(m)
        for b in range(m)
        for c in range(m)
        for d in range(m)
    }
    homaloidal = all(
        T[a, b, c, d] + T[d, b, c, a] + T[a, c, b, d] + T[d, c, b, a] == 0 for (a, b, c, d) in T
    )
    return CurvatureReport(
        is_flat=tensor.is_zero(),
        e0f_sufficient=e0f,
        ricci=ricci(A, tensor),
        scalar=scalar_curvature(A, tensor),
        homaloidal_center=homaloidal,
    )


def derham_euclidean_factor(A, D):
    """Basis (columns, original coordinates) of {z central : j(z) = j(iota z) = 0}."""
    if D.k:
        raise DegenerateCenter("the de Rham factor needs a nondegenerate center")
    r = D.r
    m = D.outer.stop - D.outer.start
    rows = []
    for alpha in range(r):
        y = q.zeros(A.dim)
        y[alpha] = Fraction(1)
        j = j_adapted(D, y).reshape(-1)
        jiota = j_adapted(D, D.iota @ y).reshape(-1)
        rows.append(np.concatenate([j, jiota]))
    if not rows:
        return q.zeros(A.dim, 0)
    system = np.stack(rows, axis=1) if m else q.zeros(0, r)
    coeffs = q.nullspace(system)
    return q.colspace(D.basis[:, D.Z] @ coeffs) if coeffs.shape[1] else q.zeros(A.dim, 0)
