import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from nilgeo import fixtures
from nilgeo import rational as q
from nilgeo.algebra import load_algebra, witt_decompose
from nilgeo.errors import ClosedFormUnavailable, DegenerateCenter, GeodesicOverflow
from nilgeo.geodesic import (
    build_geodesic,
    eval_geodesic,
    eval_geodesic_csgf,
    expm,
    first_integral_drift,
    geodesic_rk4,
    one_param_is_geodesic,
    rk4_batch,
    speed,
)

from oracles import seeded

F = Fraction
CATALOG = [case.doc for case in fixtures.catalog()]
SIGNS = list(itertools.product((1, -1), repeat=3))


def setup(doc):
    A = load_algebra(doc)
    return A, witt_decompose(A)


def random_velocity(rng, dim, top=2):
    return q.qarray([F(rng.randint(-top, top), 4) for _ in range(dim)])


def test_expm_handles_empty_blocks():
    assert expm(np.zeros((0, 0))).shape == (0, 0)
    rot = expm(np.array([[0.0, -np.pi], [np.pi, 0.0]]))
    assert np.allclose(rot, -np.eye(2), atol=1e-14)


def test_h3_operators():
    for e, b1, b2 in SIGNS:
        A, D = setup(fixtures.h3(e, b1, b2))
        S = build_geodesic(A, D, A.vector({"z": 1, "e1": 1}))
        J = S.J_matrix
        G = np.diag(D.signs_E).astype(float)
        assert np.allclose(J.T @ G + G @ J, 0)
        assert S.E1_basis.shape[1] == 0
        assert np.allclose(J @ J, -b1 * b2 * np.eye(2))
        assert S.method == "closed_form"


def test_flat_case_closed_form():
    A, D = setup(fixtures.n4flat())
    v_init = A.vector({"v1": 1, "v2": 2, "u1": 1, "u2": -1})
    S = build_geodesic(A, D, v_init)
    assert S.J_matrix.shape == (0, 0)
    jv = A.ad_dagger(A.vector({"v1": 1, "v2": 2})) @ A.vector({"v1": 1, "v2": 2})
    for t in (0.5, 2.0, -3.0):
        got = eval_geodesic(S, t).log
        want = t * v_init.astype(float)
        want += 0.5 * t * t * jv.astype(float)
        assert np.allclose(got, want, atol=1e-12)


def test_central_velocity_gives_straight_line():
    for doc in CATALOG[::2]:
        A, D = setup(doc)
        for c in range(D.k + D.r):
            x = D.basis[:, c] * F(3, 2)
            S = build_geodesic(A, D, x)
            for t in (1.0, 4.0):
                assert np.allclose(eval_geodesic(S, t).log, t * x.astype(float), atol=1e-12)


def test_helix_on_definite_h3():
    A, D = setup(fixtures.h3())
    S = build_geodesic(A, D, A.vector({"z": 1, "e1": 1}))
    Jinv = np.linalg.inv(S.J_matrix)
    e = np.array([1.0, 0.0])
    for t in (0.3, 1.0, 2.5, 7.0):
        want = (math.cos(t) - 1) * Jinv @ e + math.sin(t) * e
        assert np.allclose(eval_geodesic(S, t).log[1:], want, atol=1e-12)
        assert np.allclose(eval_geodesic_csgf(S, t).log, eval_geodesic(S, t).log, atol=1e-10)


@pytest.mark.parametrize("e, b1, b2", SIGNS)
def test_csgf_matches_quadrature(e, b1, b2):
    A, D = setup(fixtures.h3(e, b1, b2))
    rng = seeded(e * 4 + b1 * 2 + b2)
    for _ in range(5):
        S = build_geodesic(A, D, random_velocity(rng, 3))
        for t in (0.5, 3.0, 8.0):
            a, b = eval_geodesic(S, t), eval_geodesic_csgf(S, t)
            scale = max(1.0, np.abs(a.log).max())
            assert np.abs(a.log - b.log).max() <= 1e-9 * scale
            assert np.abs(a.vel - b.vel).max() <= 1e-9 * max(1.0, np.abs(a.vel).max())


def test_csgf_on_two_dimensional_center():
    A, D = setup(fixtures.h3_times_line(1, 1, -1, 1))
    rng = seeded(9)
    for _ in range(5):
        S = build_geodesic(A, D, random_velocity(rng, 4))
        for t in (1.0, 6.0):
            a, b = eval_geodesic(S, t), eval_geodesic_csgf(S, t)
            assert np.allclose(a.log, b.log, rtol=1e-9, atol=1e-9)


def test_csgf_without_e2_is_linear():
    A, D = setup(fixtures.h3_times_line())
    v = A.vector({"w": 1, "e1": 2, "e2": -1})
    S = build_geodesic(A, D, v)
    assert not S.e2.any()
    for t in (1.0, 5.0):
        assert np.allclose(eval_geodesic_csgf(S, t).log, t * v.astype(float), atol=1e-12)


def test_csgf_needs_nondegenerate_center():
    A, D = setup(fixtures.h3null())
    S = build_geodesic(A, D, A.vector({"v": 1, "e": 1}))
    with pytest.raises(DegenerateCenter):
        eval_geodesic_csgf(S, 1.0)


def test_parabolic_fallback():
    A, D = setup(fixtures.parabolic())
    S = build_geodesic(A, D, A.vector({"z": 1, "e2": 1}))
    assert S.method == "rk4_fallback"
    assert "degenerate" in S.reason
    with pytest.raises(ClosedFormUnavailable):
        eval_geodesic(S, 1.0)
    samples = geodesic_rk4(A, A.vector({"z": 1, "e2": 1}), 2.0, 2000)
    assert abs(speed(A, samples[-1]) - speed(A, samples[0])) < 1e-12


def test_rk4_abelian_is_exact():
    A = load_algebra(fixtures.abelian(3, [1, -1, 1]))
    v = A.vector({"x1": 1, "x2": F(1, 2), "x3": -2})
    samples = geodesic_rk4(A, v, 3.0, 30)
    assert np.allclose(samples[-1].log, 3.0 * v.astype(float), rtol=0, atol=1e-14)
    D = witt_decompose(A)
    assert not first_integral_drift(A, D, samples).any()


def test_rk4_flat_n4():
    A, D = setup(fixtures.n4flat())
    v = A.vector({"v1": 1, "v2": -1, "u2": F(1, 2)})
    closed = eval_geodesic(build_geodesic(A, D, v), 1.0)
    rk = geodesic_rk4(A, v, 1.0, 1000)[-1]
    assert np.abs(closed.log - rk.log).max() <= 1e-10


def test_first_integrals():
    A, D = setup(fixtures.hq(1, -1, 1))
    rng = seeded(12)
    S = build_geodesic(A, D, random_velocity(rng, A.dim))
    samples = [eval_geodesic(S, t) for t in np.linspace(0, 10, 21)]
    assert first_integral_drift(A, D, samples).max() <= 1e-9
    A, D = setup(fixtures.h3(1, 1, -1))
    samples = geodesic_rk4(A, random_velocity(rng, 3), 10.0, 10000, record_every=500)
    assert first_integral_drift(A, D, samples).max() <= 1e-8


def test_one_parameter_examples():
    A = load_algebra(fixtures.h3())
    assert one_param_is_geodesic(A, A.vector({"z": 1}))
    assert one_param_is_geodesic(A, A.vector({"e1": 1}))
    assert not one_param_is_geodesic(A, A.vector({"z": 1, "e1": 1}))
    A = load_algebra(fixtures.h3null())
    assert not one_param_is_geodesic(A, A.vector({"v": 1}))


@pytest.mark.parametrize("doc", CATALOG[::3], ids=lambda d: d["name"])
def test_one_parameter_criterion_both_ways(doc):
    A, D = setup(doc)
    rng = seeded(len(doc["name"]))
    candidates = [random_velocity(rng, A.dim) for _ in range(6)]
    candidates += [D.basis[:, i] + D.basis[:, j] for i, j in itertools.combinations(range(A.dim), 2)]
    for x in candidates:
        S = build_geodesic(A, D, x)
        path = [eval_geodesic(S, t).log for t in (0.7, 2.0, 5.0)]
        straight = all(np.allclose(p, t * x.astype(float), atol=1e-9) for p, t in zip(path, (0.7, 2.0, 5.0)))
        assert straight == one_param_is_geodesic(A, x), list(x)


def test_quadrature_converges():
    rng = seeded(21)
    for doc in (fixtures.hq(1, 1, -1), fixtures.h12(-1, 1, 1), fixtures.h3(1, 1, 1)):
        A, D = setup(doc)
        for _ in range(3):
            S = build_geodesic(A, D, random_velocity(rng, A.dim))
            for t in (0.5, 5.0, 10.0):
                a, b = eval_geodesic(S, t), eval_geodesic(S, t, quad_points=128)
                central = list(range(D.k + D.r))
                ca = np.asarray(D.to_adapted(a.log), float)[central]
                cb = np.asarray(D.to_adapted(b.log), float)[central]
                assert np.abs(ca - cb).max() <= 1e-10 * max(1.0, np.abs(ca).max())


def test_long_times_finite_or_flagged():
    rng = seeded(1000)
    for doc in CATALOG:
        A, D = setup(doc)
        S = build_geodesic(A, D, random_velocity(rng, A.dim))
        for t in (1000.0, -1000.0):
            try:
                sample = eval_geodesic(S, t)
            except GeodesicOverflow:
                assert np.abs(np.linalg.eigvals(S.J_matrix).real).max() > 0
                continue
            assert np.all(np.isfinite(sample.log))


@pytest.mark.parametrize("doc", [fixtures.h3(), fixtures.hq(), fixtures.h3null(1), fixtures.n4flat()], ids=lambda d: d["name"])
def test_long_times_definite(doc):
    A, D = setup(doc)
    S = build_geodesic(A, D, random_velocity(seeded(8), A.dim))
    sample = eval_geodesic(S, 1000.0)
    assert abs(speed(A, sample) - speed(A, eval_geodesic(S, 0.0))) <= 1e-9 * max(1.0, np.abs(sample.vel).max() ** 2)


def test_speed_drift_scales_with_growth():
    # hyperbolic geodesics grow like e^{lambda t}; <W, W> then cancels terms of size |W|^2
    rng = seeded(3)
    for doc in (fixtures.h3(-1, 1, -1), fixtures.hq(1, 1, -1), fixtures.h12(-1, -1, 1)):
        A, D = setup(doc)
        vels = [random_velocity(rng, A.dim, top=4) for _ in range(10)]
        times, _, W = rk4_batch(A, np.array([v.astype(float) for v in vels]), 10.0, 20000, record_every=1000)
        for b, v in enumerate(vels):
            S = build_geodesic(A, D, v)
            for series in ([eval_geodesic(S, t).vel for t in times], list(W[:, b])):
                G = A.float_gram
                s0 = series[0] @ G @ series[0]
                scale = max(1.0, max(float(w @ w) for w in series))
                drift = max(abs(w @ G @ w - s0) for w in series)
                assert drift <= 1e-13 * scale
