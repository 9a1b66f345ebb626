"""Geodesics through the identity: closed form, diagonalized form and an RK4 oracle.

All evaluation happens in floating point on the adapted frame of a
Decomposition; samples are reported in the algebra's own basis.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.polynomial.legendre import leggauss

from .errors import ClosedFormUnavailable, DegenerateCenter, GeodesicOverflow, NotDiagonalizable

KERNEL_TOL = 1e-12
EIGEN_TOL = 1e-9
DEFAULT_QUAD = 64


def expm(M):
    M = np.asarray(M, dtype=float)
    if M.shape[0] == 0:
        return np.zeros((0, 0))
    with np.errstate(over="ignore", invalid="ignore"):
        return scipy.linalg.expm(M)


def _lie(c, x, y):
    return np.einsum("...i,...j,ijk->...k", x, y, c)


@dataclass(frozen=True)
class GeodesicSample:
    """Point and left-invariant-frame velocity, both in the algebra's basis."""

    t: float
    log: np.ndarray
    vel: np.ndarray


@dataclass(frozen=True, eq=False)
class GeodesicState:
    algebra: object
    decomposition: object
    initial_log: np.ndarray
    v0_split: tuple
    J_matrix: np.ndarray
    Jcal_matrix: np.ndarray
    RJ_matrix: np.ndarray
    E1_basis: np.ndarray | None
    E2_basis: np.ndarray | None
    y1: np.ndarray | None
    y2: np.ndarray | None
    x1: np.ndarray | None
    x2: np.ndarray | None
    e1: np.ndarray | None
    e2: np.ndarray | None
    Jinv: np.ndarray | None
    method: str
    reason: str = ""

    # frame data, adapted coordinates
    @property
    def frame_bracket(self):
        return self.decomposition.frame.float_bracket

    @property
    def frame_gram(self):
        return self.decomposition.frame.float_gram

    def adapted_initial(self):
        u0, z0, v0, e0 = self.v0_split
        return np.concatenate([u0, z0, v0, e0])


def _frame_dagger(c, G, Ginv, x, a):
    ad = np.einsum("i,ijk->kj", x, c)
    return Ginv @ (ad.T @ (G @ a))


def build_geodesic(A, D, v_init):
    """Split initial data and assemble the operators of the closed form."""
    y0 = np.asarray(D.to_adapted(A.vector(v_init)), dtype=float)
    k, r, s = D.k, D.r, D.s
    n = A.dim
    U, Z, V, E, out = D.U, D.Z, D.V, D.E, D.outer
    c = D.frame.float_bracket
    G = D.frame.float_gram
    Ginv = np.linalg.inv(G)
    u0, z0, v0, e0 = y0[U].copy(), y0[Z].copy(), y0[V].copy(), y0[E].copy()
    anchor = np.zeros(n)
    anchor[Z] = z0
    anchor[V] = v0
    m = k + s
    J = np.zeros((s, s))
    Jcal = np.zeros((k, m))
    RJ = np.zeros((s, m))
    for col in range(m):
        y = np.zeros(n)
        y[out.start + col] = 1.0
        img = _frame_dagger(c, G, Ginv, y, anchor)
        Jcal[:, col] = img[U]
        RJ[:, col] = img[E]
    J = RJ[:, k:]
    common = dict(
        algebra=A,
        decomposition=D,
        initial_log=np.zeros(n),
        v0_split=(u0, z0, v0, e0),
        J_matrix=J,
        Jcal_matrix=Jcal,
        RJ_matrix=RJ,
    )
    vvec = np.concatenate([v0, np.zeros(s)])
    y = RJ @ vvec
    GE = G[E, E]
    scale = max(1.0, np.linalg.norm(J))
    if s:
        _, sv, vt = np.linalg.svd(J)
        null_mask = np.concatenate([sv <= KERNEL_TOL * scale, np.ones(s - len(sv), bool)])
        B1 = vt[null_mask].T
    else:
        B1 = np.zeros((0, 0))
    d1 = B1.shape[1] if s else 0
    fallback = dict(E1_basis=None, E2_basis=None, y1=None, y2=None, x1=None, x2=None, e1=None, e2=None, Jinv=None)
    if d1:
        g1 = B1.T @ GE @ B1
        if np.min(np.abs(np.linalg.eigvalsh(g1))) <= KERNEL_TOL * max(1.0, np.abs(g1).max()):
            return GeodesicState(**common, **fallback, method="rk4_fallback", reason="metric degenerate on ker J")
        _, _, vt = np.linalg.svd(B1.T @ GE)
        B2 = vt[d1:].T
        P1 = B1 @ np.linalg.solve(g1, B1.T @ GE)
    else:
        B2 = np.eye(s)
        P1 = np.zeros((s, s))
    P2 = np.eye(s) - P1
    d2 = B2.shape[1]
    if d2:
        pinvB2 = np.linalg.pinv(B2)
        J2 = pinvB2 @ J @ B2
        if np.linalg.norm(B2 @ J2 - J @ B2) > EIGEN_TOL * scale or np.linalg.cond(J2) > 1e12:
            return GeodesicState(**common, **fallback, method="rk4_fallback", reason="J not invertible on E2")
        Jinv = B2 @ np.linalg.solve(J2, pinvB2 @ P2)
    else:
        Jinv = np.zeros((s, s))
    y1, y2 = P1 @ y, P2 @ y
    e1, e2 = P1 @ e0, P2 @ e0

    def embed(vpart, epart):
        w = np.zeros(n)
        w[V] = vpart
        w[E] = epart
        return w

    x1 = embed(v0, e1 - Jinv @ y2)
    x2 = embed(np.zeros(k), e2 + Jinv @ y2)
    return GeodesicState(
        **common,
        E1_basis=B1,
        E2_basis=B2,
        y1=embed(np.zeros(k), y1),
        y2=embed(np.zeros(k), y2),
        x1=x1,
        x2=x2,
        e1=e1,
        e2=e2,
        Jinv=Jinv,
        method="closed_form",
    )


def _require_closed(S):
    if S.method != "closed_form":
        raise ClosedFormUnavailable(f"closed form unavailable: {S.reason}")


def _exp_tJ(S, times):
    """e^{sJ} for an array of times, shape (len(times), s, s)."""
    J = S.J_matrix
    return np.stack([expm(t * J) for t in times]) if len(times) else np.zeros((0,) + J.shape)


def _finish(S, t, log_adapted, vel_adapted):
    D = S.decomposition
    if not (np.all(np.isfinite(log_adapted)) and np.all(np.isfinite(vel_adapted))):
        raise GeodesicOverflow(f"geodesic evaluation overflowed at t={t}")
    P = np.asarray(D.basis, dtype=float)
    return GeodesicSample(float(t), P @ log_adapted, P @ vel_adapted)


def _positions(S, times, etjs):
    """x(s) and x'(s) (adapted, full length) for each time."""
    D = S.decomposition
    E = D.E
    s = np.asarray(times, dtype=float)[:, None]
    Jx2 = S.Jinv @ S.x2[E]
    X = s * S.x1 + 0.5 * s**2 * S.y1
    Xd = np.broadcast_to(S.x1, X.shape) + s * S.y1
    X = X.copy()
    Xd = Xd.copy()
    X[:, E] += np.einsum("tab,b->ta", etjs, Jx2) - Jx2
    Xd[:, E] += np.einsum("tab,b->ta", etjs, S.x2[E])
    return X, Xd


def eval_geodesic(S, t, quad_points=None):
    """Closed-form point at time t; the z and u integrals use Gauss-Legendre panels."""
    _require_closed(S)
    D = S.decomposition
    U, Z, V, E, out = D.U, D.Z, D.V, D.E, D.outer
    u0, z0, v0, _ = S.v0_split
    t = float(t)
    c = S.frame_bracket
    Q = quad_points or DEFAULT_QUAD
    panels = max(1, math.ceil(abs(t)))
    h = t / panels
    with np.errstate(over="ignore", invalid="ignore"):
        nodes, weights = leggauss(Q)
        tau = (nodes + 1) / 2
        w = weights / 2 * h
        step = expm(h * S.J_matrix)
        offsets = _exp_tJ(S, tau * h)
        bases = [np.eye(S.J_matrix.shape[0])]
        for _ in range(panels - 1):
            bases.append(bases[-1] @ step)
        bases = np.stack(bases)
        etjs = np.einsum("pab,qbc->pqac", bases, offsets).reshape(panels * Q, *S.J_matrix.shape)
        times = (np.arange(panels)[:, None] * h + tau[None, :] * h).reshape(-1)
        weights_all = np.tile(w, panels)
        X, Xd = _positions(S, times, etjs)
        br = _lie(c, Xd, X)
        integral = -0.5 * weights_all @ br
        jx = X[:, out] @ S.Jcal_matrix.T
        jint = weights_all @ jx
        Xt, Xdt = _positions(S, [t], bases[-1:] @ step[None])
    log = np.zeros(D.algebra.dim)
    log[out] = Xt[0, out]
    log[Z] = t * z0 + integral[Z]
    log[U] = t * u0 + integral[U] + jint
    vel = np.zeros_like(log)
    vel[out] = Xdt[0, out]
    vel[Z] = z0
    vel[U] = u0 + S.Jcal_matrix @ Xt[0, out]
    return _finish(S, t, log, vel)


def _eigenspaces(S):
    """Distinct eigenvalues of J^2 on E2 and the matching subspaces (columns in E)."""
    B2 = S.E2_basis
    d2 = B2.shape[1]
    if d2 == 0:
        return []
    J2 = np.linalg.pinv(B2) @ S.J_matrix @ B2
    sq = J2 @ J2
    scale = max(1.0, np.linalg.norm(sq))
    vals = np.linalg.eigvals(sq)
    if np.max(np.abs(vals.imag)) > EIGEN_TOL * scale:
        raise NotDiagonalizable("J^2 has non-real eigenvalues")
    vals = np.sort(vals.real)
    groups = []
    for v in vals:
        if not groups or abs(v - groups[-1][-1]) > EIGEN_TOL * scale:
            groups.append([v])
        else:
            groups[-1].append(v)
    spaces = []
    total = 0
    for g in groups:
        theta = float(np.mean(g))
        _, sv, vt = np.linalg.svd(sq - theta * np.eye(d2))
        mask = np.concatenate([sv <= EIGEN_TOL * scale * 10, np.ones(d2 - len(sv), bool)])
        W = vt[mask].T
        if W.shape[1] != len(g):
            raise NotDiagonalizable("J^2 is not diagonalizable")
        spaces.append((theta, B2 @ W))
        total += W.shape[1]
    if total != d2:
        raise NotDiagonalizable("J^2 is not diagonalizable")
    return spaces


def eval_geodesic_csgf(S, t):
    """Point at time t via the eigenspace decomposition of J^2 (nondegenerate center)."""
    D = S.decomposition
    if D.k:
        raise DegenerateCenter("the diagonalized closed form needs a nondegenerate center")
    _require_closed(S)
    t = float(t)
    J = S.J_matrix
    E, Z = D.E, D.Z
    n = D.algebra.dim
    c = S.frame_bracket
    spaces = _eigenspaces(S)
    e1, e2 = S.e1, S.e2
    if spaces:
        M = np.concatenate([W for _, W in spaces], axis=1)
        coeffs = np.linalg.lstsq(M, e2, rcond=None)[0]
    ws, thetas = [], []
    start = 0
    for theta, W in spaces:
        d = W.shape[1]
        ws.append(W @ coeffs[start : start + d])
        thetas.append(theta)
        start += d

    def emb(vec):
        x = np.zeros(n)
        x[E] = vec
        return x

    def lie(a, b):
        return _lie(c, emb(a), emb(b))

    def flow(tt, w, theta):
        lam = math.sqrt(abs(theta))
        if theta < 0:
            return math.cos(tt * lam) * w + math.sin(tt * lam) / lam * (J @ w)
        return math.cosh(tt * lam) * w + math.sinh(tt * lam) / lam * (J @ w)

    with np.errstate(over="ignore", invalid="ignore"):
        inv = [J @ w / th for w, th in zip(ws, thetas)]
        inv2 = [w / th for w, th in zip(ws, thetas)]
        et_e2 = sum((flow(t, w, th) for w, th in zip(ws, thetas)), np.zeros(D.s))
        et_inv = sum((flow(t, a, th) for a, th in zip(inv, thetas)), np.zeros(D.s))
        et_inv2 = sum((flow(t, a, th) for a, th in zip(inv2, thetas)), np.zeros(D.s))
        Jinv_e2 = sum(inv, np.zeros(D.s))
        Jinv2_e2 = sum(inv2, np.zeros(D.s))
        e_t = t * e1 + et_inv - Jinv_e2
        edot = e1 + et_e2
        z1 = S.v0_split[1] + 0.5 * lie(e1, et_inv + Jinv_e2)[Z]
        for w, a in zip(ws, inv):
            z1 = z1 + 0.5 * lie(a, w)[Z]
        z2 = lie(e1, Jinv2_e2 - et_inv2)[Z] + 0.5 * lie(et_inv, Jinv_e2)[Z]
        for i, (wi, ti) in enumerate(zip(ws, thetas)):
            for j, (wj, tj) in enumerate(zip(ws, thetas)):
                if i == j:
                    continue
                f = 1.0 / (tj - ti)
                Jwi, Jinv_wj = J @ wi, inv[j]
                moving = lie(flow(t, Jwi, ti), flow(t, Jinv_wj, tj)) - lie(flow(t, wi, ti), flow(t, wj, tj))
                still = lie(Jwi, Jinv_wj) - lie(wi, wj)
                z2 = z2 - 0.5 * f * moving[Z] + 0.5 * f * still[Z]
        log = np.zeros(n)
        log[E] = e_t
        log[Z] = t * z1 + z2
        vel = np.zeros(n)
        vel[E] = edot
        vel[Z] = S.v0_split[1]
    return _finish(S, t, log, vel)


def rk4_batch(A, v_inits, t_end, steps, record_every=1):
    """RK4 on p' = W + [p, W]/2, W' = ad†_W W for many initial velocities at once.

    Returns times, positions and frame velocities with shapes (T,), (T, b, n), (T, b, n).
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    c = A.float_bracket
    G = A.float_gram
    Ginv = np.linalg.inv(G)
    W = np.atleast_2d(np.asarray(v_inits, dtype=float)).copy()
    p = np.zeros_like(W)
    h = float(t_end) / steps

    n = A.dim
    lie_flat = c.reshape(n * n, n)
    dagger_flat = c.transpose(0, 2, 1).reshape(n * n, n) @ Ginv.T

    def rhs(p, W):
        b = W.shape[0]
        dp = W + 0.5 * (p[:, :, None] * W[:, None, :]).reshape(b, -1) @ lie_flat
        dW = (W[:, :, None] * (W @ G)[:, None, :]).reshape(b, -1) @ dagger_flat
        return dp, dW

    times, P, Ws = [0.0], [p.copy()], [W.copy()]
    for i in range(1, steps + 1):
        k1p, k1w = rhs(p, W)
        k2p, k2w = rhs(p + 0.5 * h * k1p, W + 0.5 * h * k1w)
        k3p, k3w = rhs(p + 0.5 * h * k2p, W + 0.5 * h * k2w)
        k4p, k4w = rhs(p + h * k3p, W + h * k3w)
        p = p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        W = W + h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
        if i % record_every == 0 or i == steps:
            times.append(i * h)
            P.append(p.copy())
            Ws.append(W.copy())
    return np.array(times), np.stack(P), np.stack(Ws)


def geodesic_rk4(A, v_init, t_end, steps, record_every=1):
    v = np.asarray(A.vector(v_init), dtype=float)
    times, P, W = rk4_batch(A, v[None], t_end, steps, record_every)
    return [GeodesicSample(float(t), P[i, 0], W[i, 0]) for i, t in enumerate(times)]


def first_integral_drift(A, D, samples):
    """Max deviation of each central first integral from its initial value.

    The integrals are the functionals <W, c> for c in the adapted center basis.
    On a nondegenerate center they are the (signed) central coordinates of W;
    on a null center the U coordinates of W move, while their pairings do not.
    """
    G = D.frame.float_gram
    vals = [(G @ np.asarray(D.to_adapted(s.vel), dtype=float))[D.central] for s in samples]
    if not vals:
        return np.zeros(D.k + D.r)
    return np.max(np.abs(np.stack(vals) - vals[0]), axis=0)


def speed(A, sample):
    return float(sample.vel @ A.float_gram @ sample.vel)


def one_param_is_geodesic(A, x):
    x = A.vector(x)
    return all(v == 0 for v in A.ad_dagger(x) @ x)


__all__ = [
    "GeodesicSample",
    "GeodesicState",
    "build_geodesic",
    "eval_geodesic",
    "eval_geodesic_csgf",
    "expm",
    "first_integral_drift",
    "geodesic_rk4",
    "one_param_is_geodesic",
    "rk4_batch",
    "speed",
]
