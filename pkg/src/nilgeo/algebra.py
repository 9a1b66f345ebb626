"""Metric 2-step nilpotent Lie algebras, their adapted decomposition and j-maps."""

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import rational as q
from .errors import (
    DegenerateMetric,
    NonadaptedExact,
    NotAntisymmetric,
    NotCentralArgument,
    NotTwoStep,
    ParseError,
)

TOL = 1e-12


def _is_zero(x, exact, tol=TOL):
    if exact:
        return x == 0
    return abs(x) <= tol


def _contract(c, x, y):
    """[x, y] from a structure tensor c[i, j, k]."""
    return np.tensordot(x, np.tensordot(y, c, axes=([0], [1])), axes=([0], [0]))


def as_vector(x, dim):
    """Coerce to an exact Fraction vector when possible, else float."""
    arr = np.asarray(x, dtype=object).reshape(-1)
    if arr.shape[0] != dim:
        raise ParseError(f"expected a vector of length {dim}, got {arr.shape[0]}")
    if all(isinstance(v, (int, Fraction, np.integer)) and not isinstance(v, bool) for v in arr):
        return np.array([Fraction(int(v)) if isinstance(v, np.integer) else Fraction(v) for v in arr], dtype=object)
    if all(isinstance(v, str) for v in arr):
        return np.array([q.parse_rational(v) for v in arr], dtype=object)
    return np.asarray(arr, dtype=float)


class NilAlgebra:
    """A metric Lie algebra given by structure constants and a Gram matrix.

    ``bracket[i, j, k]`` is the coefficient of ``b_k`` in ``[b_i, b_j]``.
    Exact instances hold Fractions; ``validate`` enforces every invariant.
    """

    def __init__(self, labels, bracket, gram, name="", validate=True):
        self.name = name
        self.labels = tuple(labels)
        self.bracket = np.asarray(bracket)
        self.gram = np.asarray(gram)
        self.bracket.setflags(write=False)
        self.gram.setflags(write=False)
        self.exact = q.is_exact(self.bracket) and q.is_exact(self.gram)
        if validate:
            self._validate()

    @property
    def dim(self):
        return len(self.labels)

    def _validate(self):
        n = self.dim
        if len(set(self.labels)) != n:
            raise ParseError("basis labels must be distinct")
        if self.bracket.shape != (n, n, n) or self.gram.shape != (n, n):
            raise ParseError("bracket or gram has the wrong shape")
        c, g, ex = self.bracket, self.gram, self.exact

        def all_zero(arr):
            return all(_is_zero(v, ex) for v in np.asarray(arr).reshape(-1))

        if not all_zero(c + c.transpose(1, 0, 2)):
            raise NotAntisymmetric("bracket tensor is not antisymmetric")
        if not all_zero(g - g.T):
            raise DegenerateMetric("gram matrix is not symmetric")
        if _is_zero(q.det(g) if ex else np.linalg.det(g.astype(float)), ex):
            raise DegenerateMetric("gram matrix is degenerate")
        # 2-step: [[b_i, b_j], b_m] = 0
        nested = np.einsum("ijk,kml->ijml", c, c)
        if not all_zero(nested):
            i, j, m, _ = next(zip(*np.nonzero(np.vectorize(lambda v: not _is_zero(v, ex))(nested))))
            raise NotTwoStep(f"[{self.labels[i]},{self.labels[j]}] does not commute with {self.labels[m]}")
        # Jacobi, implied by the 2-step check but asserted anyway
        cyc = nested + nested.transpose(1, 2, 0, 3) + nested.transpose(2, 0, 1, 3)
        if not all_zero(cyc):
            raise NotTwoStep("Jacobi identity fails")

    def basis_vector(self, i):
        if isinstance(i, str):
            i = self.index(i)
        return q.unit(self.dim, i) if self.exact else np.eye(self.dim)[i]

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ParseError(f"unknown basis label {label!r}") from None

    def vector(self, x):
        """Vector from a {label: coefficient} dict or a coordinate sequence."""
        if isinstance(x, dict):
            out = q.zeros(self.dim)
            for label, value in x.items():
                out[self.index(label)] += q.parse_rational(value) if isinstance(value, str) else Fraction(value)
            return out
        return as_vector(x, self.dim)

    def zero(self):
        return q.zeros(self.dim) if self.exact else np.zeros(self.dim)

    def lie(self, x, y):
        return _contract(self.bracket, x, y)

    def inner(self, x, y):
        return x @ self.gram @ y

    def ad(self, x):
        """Matrix of y -> [x, y] (column convention)."""
        return np.tensordot(x, self.bracket, axes=([0], [0])).T

    @cached_property
    def gram_inverse(self):
        if self.exact:
            return q.inverse(self.gram)
        return np.linalg.inv(self.gram.astype(float))

    def ad_dagger(self, x):
        """Matrix of a -> ad†_x a, with <ad†_x a, y> = <a, [x, y]>."""
        return self.gram_inverse @ (self.ad(x).T @ self.gram)

    @cached_property
    def float_bracket(self):
        return self.bracket.astype(float)

    @cached_property
    def float_gram(self):
        return self.gram.astype(float)

    def change_basis(self, basis, labels=None, validate=False):
        """The same algebra written in the columns of ``basis``."""
        p = np.asarray(basis)
        exact = q.is_exact(p) and self.exact
        pinv = q.inverse(p) if exact else np.linalg.inv(p.astype(float))
        if not exact:
            p = p.astype(float)
        n = self.dim
        c = np.empty((n, n, n), dtype=object if exact else float)
        src = self.bracket if exact else self.float_bracket
        for i in range(n):
            for j in range(n):
                c[i, j] = pinv @ _contract(src, p[:, i], p[:, j])
        g = p.T @ (self.gram if exact else self.float_gram) @ p
        return NilAlgebra(labels or [f"b{i}" for i in range(n)], c, g, name=self.name, validate=validate)

    def __repr__(self):
        return f"NilAlgebra({self.name!r}, dim={self.dim})"


def load_algebra(doc):
    """Validated NilAlgebra from an algebra-description document (dict, JSON text or path)."""
    if isinstance(doc, str):
        text = doc
        if not text.lstrip().startswith("{"):
            with open(doc, encoding="utf-8") as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("algebra document must be a JSON object")
    try:
        labels = list(doc["basis"])
        brackets = doc.get("brackets", [])
        metric = doc["metric"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field {exc}") from exc
    if not labels or not all(isinstance(s, str) for s in labels):
        raise ParseError("basis must be a nonempty list of strings")
    if len(set(labels)) != len(labels):
        raise ParseError("basis labels must be distinct")
    n = len(labels)
    pos = {s: i for i, s in enumerate(labels)}

    def lookup(label):
        if label not in pos:
            raise ParseError(f"unknown basis label {label!r}")
        return pos[label]

    c = q.zeros(n, n, n)
    seen = set()
    for entry in brackets:
        try:
            i, j, out = lookup(entry["x"]), lookup(entry["y"]), entry["out"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed bracket entry {entry!r}") from exc
        key = frozenset((i, j))
        if key in seen:
            raise ParseError(f"duplicate bracket entry for {entry['x']},{entry['y']}")
        seen.add(key)
        if not isinstance(out, dict):
            raise ParseError("bracket 'out' must be an object")
        for label, value in out.items():
            k = lookup(label)
            v = q.parse_rational(value)
            if i == j:
                if v != 0:
                    raise NotAntisymmetric(f"[{entry['x']},{entry['x']}] must vanish")
                continue
            c[i, j, k] += v
            c[j, i, k] -= v
    g = q.zeros(n, n)
    seen = set()
    for entry in metric:
        try:
            a, b, v = lookup(entry["a"]), lookup(entry["b"]), q.parse_rational(entry["value"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed metric entry {entry!r}") from exc
        key = frozenset((a, b))
        if key in seen:
            raise ParseError(f"duplicate metric entry for {entry['a']},{entry['b']}")
        seen.add(key)
        g[a, b] = v
        g[b, a] = v
    return NilAlgebra(labels, c, g, name=str(doc.get("name", "")))


def algebra_document(A):
    """Inverse of load_algebra for exact algebras."""
    n = A.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            out = {A.labels[k]: q.format_rational(A.bracket[i, j, k]) for k in range(n) if A.bracket[i, j, k] != 0}
            if out:
                brackets.append({"x": A.labels[i], "y": A.labels[j], "out": out})
    metric = [
        {"a": A.labels[i], "b": A.labels[j], "value": q.format_rational(A.gram[i, j])}
        for i in range(n)
        for j in range(i, n)
        if A.gram[i, j] != 0
    ]
    return {"name": A.name, "basis": list(A.labels), "brackets": brackets, "metric": metric}


def center(A):
    """Reduced-echelon basis (columns) of the center."""
    if not A.exact:
        raise NotImplementedError("center requires an exact algebra")
    # a is central iff sum_j a_j c[j, i, :] = 0 for every i
    system = np.concatenate([np.asarray(A.bracket[:, i, :]).T for i in range(A.dim)], axis=0)
    basis = q.nullspace(system)
    return q.colspace(basis)


class CausalClass(enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"


def causal_character(A, v):
    v = as_vector(v, A.dim)
    norm = A.inner(v, v)
    if _is_zero(norm, q.is_exact(v) and A.exact):
        return CausalClass.NULL
    return CausalClass.TIMELIKE if norm > 0 else CausalClass.SPACELIKE


def bch_mul(A, x, y):
    x, y = as_vector(x, A.dim), as_vector(y, A.dim)
    half = Fraction(1, 2) if q.is_exact(x) and q.is_exact(y) else 0.5
    return x + y + half * A.lie(x, y)


def exp_push(A, x, a):
    """Left-invariant frame coordinates of the tangent vector a at exp(x)."""
    x, a = as_vector(x, A.dim), as_vector(a, A.dim)
    half = Fraction(1, 2) if q.is_exact(x) and q.is_exact(a) else 0.5
    return a + half * A.lie(a, x)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Adapted basis u_1..u_k, z_1..z_r, v_1..v_k, e_1..e_s.

    ``basis`` holds the adapted vectors as columns in original coordinates,
    ``frame`` is the algebra rewritten in the adapted basis and ``iota`` the
    involution in adapted coordinates.
    """

    algebra: NilAlgebra
    basis: np.ndarray
    basis_inverse: np.ndarray
    dims: tuple
    signs_Z: tuple
    signs_E: tuple
    iota: np.ndarray
    frame: NilAlgebra
    exact: bool

    @property
    def exactness_flag(self):
        return "exact" if self.exact else "approximate"

    @property
    def k(self):
        return self.dims[0]

    @property
    def r(self):
        return self.dims[1]

    @property
    def s(self):
        return self.dims[3]

    @property
    def U(self):
        return slice(0, self.k)

    @property
    def Z(self):
        return slice(self.k, self.k + self.r)

    @property
    def V(self):
        return slice(self.k + self.r, 2 * self.k + self.r)

    @property
    def E(self):
        return slice(2 * self.k + self.r, self.algebra.dim)

    @property
    def central(self):
        return slice(0, self.k + self.r)

    @property
    def outer(self):
        return slice(self.k + self.r, self.algebra.dim)

    @property
    def block_index(self):
        return tuple("U" * self.k + "Z" * self.r + "V" * self.k + "E" * self.s)

    @property
    def dual_pairing(self):
        return tuple((i, self.k + self.r + i) for i in range(self.k))

    def block(self, name):
        return getattr(self, name)

    def to_adapted(self, x):
        x = as_vector(x, self.algebra.dim)
        if not (self.exact and q.is_exact(x)):
            return self.basis_inverse.astype(float) @ x.astype(float)
        return self.basis_inverse @ x

    def from_adapted(self, y):
        if self.exact and q.is_exact(y):
            return self.basis @ y
        return self.basis.astype(float) @ np.asarray(y, dtype=float)

    def project(self, x, name):
        """Component of x (original coordinates) in one block."""
        y = self.to_adapted(x)
        keep = q.zeros(len(y)) if q.is_exact(y) else np.zeros(len(y))
        sl = self.block(name)
        keep[sl] = y[sl]
        return self.from_adapted(keep)

    def basis_of(self, name):
        return self.basis[:, self.block(name)]

    @property
    def signature(self):
        """(count of +1, count of -1) of the diagonalized Gram."""
        plus = self.k + sum(1 for e in self.signs_Z + self.signs_E if e > 0)
        minus = self.k + sum(1 for e in self.signs_Z + self.signs_E if e < 0)
        return plus, minus


def _orthogonalize(A, vectors):
    """Orthogonal basis of a nondegenerate span, processed in order (exact)."""
    pool = [v for v in vectors]
    out = []
    while pool:
        idx = next((i for i, p in enumerate(pool) if A.inner(p, p) != 0), None)
        if idx is None:
            # all remaining vectors null: combine the first with a partner
            partner = next(i for i in range(1, len(pool)) if A.inner(pool[0], pool[i]) != 0)
            pool[0] = pool[0] + pool[partner]
            idx = 0
        w = pool.pop(idx)
        nw = A.inner(w, w)
        out.append(w)
        pool = [p - (A.inner(p, w) / nw) * w for p in pool]
    return out


def _normalize(A, vectors, exact):
    """Orthonormal vectors and signs; exact when every norm is a rational square."""
    norms = [A.inner(w, w) for w in vectors]
    signs = tuple(1 if n > 0 else -1 for n in norms)
    roots = [q.is_square(abs(n)) for n in norms]
    if exact and all(r is not None for r in roots):
        return [w / r for w, r in zip(vectors, roots)], signs, True
    return [w.astype(float) / np.sqrt(float(abs(n))) for w, n in zip(vectors, norms)], signs, False


def witt_decompose(A, require_exact=False):
    """Adapted decomposition n = U + Z + V + E with the involution iota."""
    if not A.exact:
        raise NotImplementedError("witt_decompose requires an exact algebra")
    n = A.dim
    g = A.gram
    C = center(A)
    gc = C.T @ g @ C
    U = q.colspace(C @ q.nullspace(gc)) if C.shape[1] else q.zeros(n, 0)
    k = U.shape[1]
    # complement of U inside the center, in center-basis order
    z0 = []
    span = U
    for col in range(C.shape[1]):
        trial = np.concatenate([span, C[:, col : col + 1]], axis=1)
        if q.rank(trial) > span.shape[1]:
            z0.append(C[:, col])
            span = trial
    # hyperbolic completion of U inside the orthocomplement of Z0
    if z0:
        Zm = np.stack(z0, axis=1)
        proj = q.eye(n) - Zm @ q.inverse(Zm.T @ g @ Zm) @ Zm.T @ g
    else:
        proj = q.eye(n)
    V = q.zeros(n, 0)
    if k:
        chosen = []
        pairing = q.zeros(k, 0)
        for i in range(n):
            cand = proj @ q.unit(n, i)
            col = (U.T @ g @ cand).reshape(k, 1)
            trial = np.concatenate([pairing, col], axis=1)
            if q.rank(trial) > pairing.shape[1]:
                chosen.append(cand)
                pairing = trial
            if len(chosen) == k:
                break
        W = np.stack(chosen, axis=1) @ q.inverse(pairing)
        ww = W.T @ g @ W
        V = W - Fraction(1, 2) * U @ ww
    z_orth = _orthogonalize(A, z0)
    others = [U[:, i] for i in range(k)] + [V[:, i] for i in range(k)] + z_orth
    if others:
        E_raw = q.nullspace(np.stack(others, axis=0) @ g)
    else:
        E_raw = q.eye(n)
    e_orth = _orthogonalize(A, [E_raw[:, i] for i in range(E_raw.shape[1])])
    zs, signs_Z, exact_z = _normalize(A, z_orth, True)
    es, signs_E, exact_e = _normalize(A, e_orth, True)
    exact = exact_z and exact_e
    if require_exact and not exact:
        raise NonadaptedExact("orthonormalizing Z or E needs irrational scaling")
    r, s = len(zs), len(es)
    cols = [U[:, i] for i in range(k)] + zs + [V[:, i] for i in range(k)] + es
    if exact:
        P = np.stack(cols, axis=1) if cols else q.zeros(n, 0)
        Pinv = q.inverse(P)
        iota = q.zeros(n, n)
    else:
        P = np.stack([np.asarray(c, dtype=float) for c in cols], axis=1)
        Pinv = np.linalg.inv(P)
        iota = np.zeros((n, n))
    one = Fraction(1) if exact else 1.0
    for i in range(k):
        iota[k + r + i, i] = one
        iota[i, k + r + i] = one
    for a, e in enumerate(signs_Z):
        iota[k + a, k + a] = one * e
    for a, e in enumerate(signs_E):
        iota[2 * k + r + a, 2 * k + r + a] = one * e
    labels = (
        [f"u{i + 1}" for i in range(k)]
        + [f"z{i + 1}" for i in range(r)]
        + [f"v{i + 1}" for i in range(k)]
        + [f"e{i + 1}" for i in range(s)]
    )
    frame = A.change_basis(P, labels=labels)
    return Decomposition(A, P, Pinv, (k, r, k, s), signs_Z, signs_E, iota, frame, exact)


def _central_adapted(D, a):
    y = D.to_adapted(a)
    exact = D.exact and q.is_exact(y)
    if not all(_is_zero(v, exact) for v in y[D.outer]):
        raise NotCentralArgument("argument has components outside U+Z")
    return y


def j_adapted(D, y):
    """Matrix of j(a) on V+E for a given in adapted coordinates."""
    F = D.frame
    out = D.outer
    m = out.stop - out.start
    exact = D.exact and q.is_exact(y)
    cols = []
    iy = D.iota @ y
    for c in range(m):
        x = D.frame.basis_vector(out.start + c) if exact else np.eye(F.dim)[out.start + c]
        col = D.iota @ (F.ad_dagger(x) @ iy)
        cols.append(col[out])
    if not cols:
        return q.zeros(0, 0) if exact else np.zeros((0, 0))
    mat = np.stack(cols, axis=1)
    return mat if exact else mat.astype(float)


def j_map(A, D, a):
    """Matrix of j(a) on the adapted V+E basis; a in original coordinates."""
    return j_adapted(D, _central_adapted(D, a))


@dataclass(frozen=True)
class PhReport:
    is_ph: bool
    witness: dict | None = None


def ph_type_check(A, D):
    k, r = D.k, D.r
    m = D.outer.stop - D.outer.start
    exact = D.exact
    ident = q.eye(m) if exact else np.eye(m)
    central = range(k + r)
    n = A.dim

    def vec(i):
        y = q.zeros(n) if exact else np.zeros(n)
        y[i] = Fraction(1) if exact else 1.0
        return y

    js = {i: j_adapted(D, vec(i)) for i in central}

    def companion(i, j):
        return vec(i) @ D.frame.gram @ (D.iota @ vec(j))

    def first_bad(mat):
        for col in range(m):
            for row in range(m):
                if not _is_zero(mat[row, col], exact):
                    return col
        return None

    for i in central:
        bad = first_bad(js[i] @ js[i] + companion(i, i) * ident)
        if bad is not None:
            return PhReport(False, {"identity": "square", "a": D.from_adapted(vec(i)), "x_index": bad})
    for i in central:
        for j in central:
            if j <= i:
                continue
            mat = js[i] @ js[j] + js[j] @ js[i] + 2 * companion(i, j) * ident
            bad = first_bad(mat)
            if bad is not None:
                return PhReport(
                    False,
                    {"identity": "polarized", "a": D.from_adapted(vec(i)), "b": D.from_adapted(vec(j)), "x_index": bad},
                )
    return PhReport(True, None)


def nonsingular_at(A, D, a):
    mat = j_map(A, D, a)
    if mat.shape[0] == 0:
        return True
    if q.is_exact(mat):
        return q.det(mat) != 0
    return abs(np.linalg.det(mat)) > TOL


def j_determinant_polynomial(A, D):
    """det j(sum t_a a_a) over the adapted central basis, as a sympy expression."""
    import sympy

    k, r = D.k, D.r
    m = D.outer.stop - D.outer.start
    ts = sympy.symbols(f"t1:{k + r + 1}")
    total = sympy.zeros(m, m)
    for i in range(k + r):
        y = q.unit(A.dim, i) if D.exact else np.eye(A.dim)[i]
        mat = j_adapted(D, y)
        conv = sympy.Rational if D.exact else sympy.Float
        total += ts[i] * sympy.Matrix(m, m, lambda a, b: conv(str(mat[a, b])))
    return sympy.expand(total.det()) if m else sympy.Integer(1)
