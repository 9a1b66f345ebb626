"""Translated geodesics and periods of lattice elements."""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rational as q
from .algebra import CausalClass, causal_character
from .errors import (
    DegenerateCenter,
    DegenerateMetric,
    DimensionMismatch,
    InconsistentSolve,
    NotFlatCase,
    NullDistinguished,
    ObstructedTranslation,
    ParseError,
)
from .geodesic import build_geodesic, eval_geodesic, expm, rk4_batch

TRANSLATE_TOL = 1e-8
FIX_TOL = 1e-9


@dataclass(frozen=True)
class LatticeSpec:
    generators: tuple
    name: str = ""

    def __post_init__(self):
        rows = [tuple(q.parse_rational(v) if isinstance(v, str) else Fraction(v) for v in g) for g in self.generators]
        if not rows:
            raise ParseError("a lattice needs at least one generator")
        if len({len(r) for r in rows}) != 1:
            raise DimensionMismatch("generators have different lengths")
        object.__setattr__(self, "generators", tuple(rows))
        if q.rank(self.matrix) != len(rows):
            raise DimensionMismatch("lattice generators are linearly dependent")

    @property
    def matrix(self):
        """Generators as rows."""
        return q.qarray([list(r) for r in self.generators])

    @property
    def dim(self):
        return len(self.generators[0])


def load_lattice(doc, name=""):
    if not isinstance(doc, dict) or "generators" not in doc:
        raise ParseError("lattice document needs a 'generators' list")
    return LatticeSpec(tuple(tuple(g) for g in doc["generators"]), doc.get("name", name))


@dataclass(frozen=True)
class PeriodRecord:
    """``velocity`` is the initial velocity of a unit-speed geodesic from the
    identity translated by phi, when one was constructed."""

    phi_log: np.ndarray
    omega: float | None
    kind: str
    causal: CausalClass
    omega_squared: Fraction | None = None
    velocity: np.ndarray | None = None
    reason: str = ""


def _split(D, x):
    """(central part, outer part) of x in original coordinates."""
    return D.project(x, "central"), D.project(x, "outer")


def _float_bch(c, x, y):
    return x + y + 0.5 * np.einsum("...i,...j,ijk->...k", x, y, c)


def _log_path(A, D, v_init, times):
    """log gamma(t) at the given times, closed form when available."""
    S = build_geodesic(A, D, v_init)
    if S.method == "closed_form":
        return S, np.stack([eval_geodesic(S, t).log for t in times])
    out = []
    for t in times:
        if t == 0:
            out.append(np.zeros(A.dim))
            continue
        steps = max(2000, int(math.ceil(2000 * abs(t))))
        _, P, _ = rk4_batch(A, np.asarray(A.vector(v_init), dtype=float)[None], t, steps, record_every=steps)
        out.append(P[-1, 0])
    return S, np.stack(out)


def translation_residual(A, D, phi_log, gamma_init, omega, base=None):
    """Max mismatch of phi*gamma(t) against gamma(t+omega) over the sample times.

    With ``base`` the geodesic starts at exp(base); it is conjugated back to
    the identity first.  Returns (residual, fixed_residual) where the second
    entry measures how far e^{omega J} is from fixing e0 + y1 + J^{-1} y2
    (None without a closed form).
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    c = A.float_bracket
    phi = np.asarray(A.vector(phi_log), dtype=float)
    if base is not None:
        xi = np.asarray(A.vector(base), dtype=float)
        # exp(-xi) phi exp(xi) in a 2-step group
        phi = phi + np.einsum("i,j,ijk->k", phi, xi, c)
    samples = [0.0, omega / 3, omega / 2, 2 * omega / 3, omega]
    times = samples + [t + omega for t in samples]
    S, logs = _log_path(A, D, gamma_init, times)
    before, after = logs[: len(samples)], logs[len(samples) :]
    pushed = _float_bch(c, phi[None, :], before)
    scale = max(1.0, float(np.abs(after).max()))
    residual = float(np.abs(pushed - after).max()) / scale
    fixed = None
    if S.method == "closed_form" and D.s:
        target = S.v0_split[3] + S.y1[D.E] + S.Jinv @ S.y2[D.E]
        moved = expm(omega * S.J_matrix) @ target
        fixed = float(np.abs(moved - target).max()) / max(1.0, float(np.abs(target).max()))
    return residual, fixed


def translates(A, D, phi_log, gamma_init, omega, base=None):
    residual, fixed = translation_residual(A, D, phi_log, gamma_init, omega, base)
    return residual <= TRANSLATE_TOL and (fixed is None or fixed <= FIX_TOL)


def _bracket_image(A, x):
    """Columns [x, b_i] spanning [x, n]."""
    return np.stack([A.lie(x, A.basis_vector(i)) for i in range(A.dim)], axis=1)


def _orthogonal_part(A, a, S):
    """a minus its component along span(S) with respect to the metric."""
    cols = q.colspace(S)
    if cols.shape[1] == 0:
        return a.copy()
    gram = cols.T @ A.gram @ cols
    rhs = cols.T @ A.gram @ a
    try:
        coeffs = q.solve(gram, rhs)
    except InconsistentSolve as exc:
        raise ObstructedTranslation("the metric on [x*, n] admits no orthogonal split of a*") from exc
    return a - cols @ coeffs


def _norm(value):
    return math.sqrt(abs(float(value)))


def construct_translated(A, D, phi_log):
    """A geodesic exp(xi) exp(t v) translated by phi, with its translation length.

    Returns a dict with xi, omega_star, geodesic_base (= xi), velocity
    (unit speed unless null), a_prime and causal.
    """
    if not A.exact:
        raise NotImplementedError("construct_translated requires an exact algebra")
    phi = A.vector(phi_log)
    if not q.is_exact(phi):
        raise ParseError("construct_translated needs rational coordinates")
    a_star, x_star = _split(D, phi)
    if any(v != 0 for v in A.ad_dagger(x_star) @ x_star):
        raise ObstructedTranslation("x* is not orthogonal to [x*, n]")
    M = _bracket_image(A, x_star)
    a_prime = _orthogonal_part(A, a_star, M)
    target = a_prime - a_star
    y = q.solve(M @ M.T, target)
    xi = M.T @ y
    if any(A.lie(x_star, xi) != target):
        raise InconsistentSolve("no xi with [x*, xi] = a' - a*")
    gen = a_prime + x_star
    sq = A.inner(gen, gen)
    omega = _norm(sq) if sq != 0 else 1.0
    exact_root = q.is_square(abs(sq)) if sq != 0 else Fraction(1)
    velocity = gen / exact_root if exact_root is not None else gen.astype(float) / omega
    return {
        "xi": xi,
        "omega_star": omega,
        "omega_star_squared": abs(sq) if sq != 0 else None,
        "geodesic_base": xi,
        "velocity": velocity,
        "a_prime": a_prime,
        "causal": causal_character(A, gen),
    }


def _is_flat_case(A, D):
    if D.s:
        return False
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            y = D.to_adapted(A.bracket[i, j])
            if any(v != 0 for v in y[D.k :]):
                return False
    return True


def flat_period(A, D, phi_log):
    """Period of phi when [n,n] lies in U and E = 0.

    The squared period is |<log phi, log phi>| = |2<u*,v*> + <z*,z*>|.  A
    translated geodesic exists only when ad†_{v*} v* = 0; otherwise, and for
    null elements, the record has no omega.
    """
    if not _is_flat_case(A, D):
        raise NotFlatCase("flat periods need [n,n] inside U and E = 0")
    phi = A.vector(phi_log)
    _, v_star = _split(D, phi)
    sq = A.inner(phi, phi)
    causal = causal_character(A, phi)
    if sq == 0:
        return PeriodRecord(phi, None, "flat_exact", causal, reason="null: no period")
    if any(v != 0 for v in A.ad_dagger(v_star) @ v_star):
        return PeriodRecord(phi, None, "flat_exact", causal, abs(sq), reason="obstructed: ad†_{v*} v* != 0")
    omega = _norm(sq)
    root = q.is_square(abs(sq))
    velocity = phi / root if root is not None else phi.astype(float) / omega
    return PeriodRecord(phi, omega, "flat_exact", causal, abs(sq), velocity)


def distinguished_period(A, D, phi_log):
    """omega* = |z' + e*| with z' the part of z* orthogonal to [e*, n]."""
    if D.k:
        raise DegenerateCenter("distinguished periods need a nondegenerate center")
    phi = A.vector(phi_log)
    z_star, e_star = _split(D, phi)
    z_prime = _orthogonal_part(A, z_star, _bracket_image(A, e_star))
    gen = z_prime + e_star
    sq = A.inner(gen, gen)
    if sq == 0:
        raise NullDistinguished("z' + e* is null")
    omega = _norm(sq)
    root = q.is_square(abs(sq))
    velocity = gen / root if root is not None else gen.astype(float) / omega
    return PeriodRecord(phi, omega, "distinguished", causal_character(A, gen), abs(sq), velocity)


def _spectrum_setup(lattice, gram):
    L = lattice.matrix
    G = q.qarray(gram)
    if G.shape != (lattice.dim, lattice.dim):
        raise DimensionMismatch("gram size does not match the lattice")
    if q.det(G) == 0:
        raise DegenerateMetric("gram matrix is degenerate")
    Q = L @ G @ L.T
    Gf = G.astype(float)
    w, V = np.linalg.eigh((Gf + Gf.T) / 2)
    companion = V @ np.diag(np.abs(w)) @ V.T
    Lf = L.astype(float)
    P = Lf @ companion @ Lf.T
    return Q, P


def _box(P, radius):
    inv = np.linalg.inv(P)
    return [int(math.floor(radius * math.sqrt(inv[i, i]) + 1e-9)) for i in range(P.shape[0])]


def _group(values, bound_sq):
    counts = {}
    for v in values:
        if v != 0 and abs(v) <= bound_sq:
            counts[abs(v)] = counts.get(abs(v), 0) + 1
    return sorted((math.sqrt(float(k)), n, k) for k, n in counts.items())


def flat_torus_spectrum(lattice, gram, bound):
    """Lengths |g| <= bound of non-null lattice vectors with multiplicity.

    Coefficients range over the box enclosing every g whose companion
    (positive-definite) norm is at most twice the bound.  For an indefinite
    gram this cannot catch every short non-null vector.
    Returns sorted (omega, multiplicity, omega_squared) triples.
    """
    if not bound > 0:
        raise ValueError("bound must be positive")
    Q, P = _spectrum_setup(lattice, gram)
    box = _box(P, 2 * float(bound))
    bound_sq = _bound_sq(bound)
    denom = math.lcm(*[v.denominator for v in Q.reshape(-1)])
    Qi = np.array([[int(v * denom) for v in row] for row in Q], dtype=object)
    ranges = [np.arange(-b, b + 1) for b in box]
    coeffs = np.array(np.meshgrid(*ranges, indexing="ij"), dtype=object).reshape(len(box), -1).T
    vals = np.einsum("ni,ij,nj->n", coeffs, Qi, coeffs)
    return _group((Fraction(int(v), denom) for v in vals), bound_sq)


def _bound_sq(bound):
    """Exact squared bound; float bounds get a relative slack of 1e-12."""
    if isinstance(bound, float):
        return Fraction(bound) ** 2 * (1 + Fraction(1, 10**12))
    return Fraction(bound) ** 2


def brute_force_spectrum(lattice, gram, bound, box):
    """Direct enumeration over an explicit coefficient box (test oracle)."""
    L = lattice.matrix
    G = q.qarray(gram)
    values = []
    for c in itertools.product(*[range(-b, b + 1) for b in box]):
        g = q.qarray(list(c)) @ L
        values.append(g @ G @ g)
    return _group(values, _bound_sq(bound))


__all__ = [
    "LatticeSpec",
    "PeriodRecord",
    "brute_force_spectrum",
    "construct_translated",
    "distinguished_period",
    "flat_period",
    "flat_torus_spectrum",
    "load_lattice",
    "translates",
    "translation_residual",
]
