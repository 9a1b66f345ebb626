import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilgeo import fixtures
from nilgeo import rational as q
from nilgeo.algebra import CausalClass, load_algebra, witt_decompose
from nilgeo.errors import (
    DegenerateCenter,
    DegenerateMetric,
    DimensionMismatch,
    NotFlatCase,
    NullDistinguished,
    ObstructedTranslation,
    ParseError,
)
from nilgeo.geodesic import build_geodesic, eval_geodesic, one_param_is_geodesic
from nilgeo.lattice import (
    LatticeSpec,
    brute_force_spectrum,
    construct_translated,
    distinguished_period,
    flat_period,
    flat_torus_spectrum,
    load_lattice,
    translates,
    translation_residual,
)

F = Fraction
R2 = math.sqrt(2)


def setup(doc):
    A = load_algebra(doc)
    return A, witt_decompose(A)


def test_h3_straight_translation():
    A, D = setup(fixtures.h3())
    assert translates(A, D, A.vector({"e1": 2}), A.vector({"e1": 1}), 2.0)
    assert not translates(A, D, A.vector({"e1": 2}), A.vector({"e1": 1}), 1.5)


def test_omega_must_be_positive():
    A, D = setup(fixtures.h3())
    with pytest.raises(ValueError):
        translates(A, D, A.zero(), A.vector({"z": 1}), 0.0)


def test_flat_n4_sum_example_is_obstructed():
    # v1 + u1 is not orthogonal to [v1, n] = span(u1), so no geodesic is translated
    A, D = setup(fixtures.n4flat())
    phi = A.vector({"u1": 1, "v1": 1})
    assert not one_param_is_geodesic(A, phi)
    assert not translates(A, D, phi, phi.astype(float) / R2, R2)
    with pytest.raises(ObstructedTranslation):
        construct_translated(A, D, phi)
    rec = flat_period(A, D, phi)
    assert rec.omega is None and rec.omega_squared == 2 and rec.reason.startswith("obstructed")


def test_flat_n4_second_pair():
    A, D = setup(fixtures.n4flat())
    phi = A.vector({"u2": 1, "v2": 1})
    rec = flat_period(A, D, phi)
    assert rec.omega == pytest.approx(R2) and rec.causal is CausalClass.TIMELIKE
    assert translates(A, D, phi, rec.velocity, rec.omega)
    built = construct_translated(A, D, phi)
    assert list(built["a_prime"]) == list(A.vector({"u2": 1}))
    assert built["omega_star"] == pytest.approx(R2)


def test_flat_period_examples():
    A, D = setup(fixtures.n4flat())
    rec = flat_period(A, D, A.vector({"u2": 1, "v1": 1}))
    assert rec.omega is None and rec.reason.startswith("null")
    A, D = setup(fixtures.h3())
    with pytest.raises(NotFlatCase):
        flat_period(A, D, A.vector({"z": 1}))


def test_construct_nonsingular_case():
    A, D = setup(fixtures.h3())
    phi = A.vector({"z": 1, "e1": 1})
    built = construct_translated(A, D, phi)
    xi = built["xi"]
    assert list(A.lie(A.vector({"e1": 1}), xi)) == list(A.vector({"z": -1}))
    assert not any(built["a_prime"])
    assert built["omega_star"] == 1.0
    assert translates(A, D, phi, built["velocity"], built["omega_star"], base=xi)
    assert not translates(A, D, phi, built["velocity"], built["omega_star"])


def test_construct_central():
    A, D = setup(fixtures.hq(1, 1, -1))
    phi = A.vector({"z": 2, "u1": 1})
    built = construct_translated(A, D, phi)
    assert not any(built["xi"])
    assert translates(A, D, phi, built["velocity"], built["omega_star"])


@pytest.mark.parametrize("doc", [fixtures.hq(1, -1, 1), fixtures.h12(1, 1, -1), fixtures.n4partial(-1, 1), fixtures.h3null(1)], ids=lambda d: d["name"])
def test_construct_and_simple_determinacy(doc):
    A, D = setup(doc)
    rng = np.random.default_rng(len(doc["name"]))
    built_any = 0
    for _ in range(30):
        y = q.qarray([F(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(A.dim)])
        if rng.random() < 0.7:
            # x* inside E is always orthogonal to [x*, n]
            y[D.V] = F(0)
        phi = D.from_adapted(y)
        try:
            built = construct_translated(A, D, phi)
        except ObstructedTranslation:
            continue
        if built["omega_star_squared"] is None:
            continue
        xi = built["xi"]
        omega = built["omega_star"]
        assert translates(A, D, phi, built["velocity"], omega, base=xi)
        v_star = np.asarray(D.project(phi, "outer"), float)
        if np.abs(v_star).max() > 0:
            v0 = np.asarray(D.project(np.asarray(built["velocity"], float), "outer"), float)
            assert np.abs(omega * v0 - v_star).max() <= 1e-10
        built_any += 1
    assert built_any >= 3


def test_distinguished_examples():
    A, D = setup(fixtures.h3())
    rec = distinguished_period(A, D, A.vector({"z": 5, "e1": 3, "e2": 4}))
    assert rec.omega == pytest.approx(5.0) and rec.omega_squared == 25
    rec = distinguished_period(A, D, A.vector({"z": 1}))
    assert rec.omega == 1.0
    A, D = setup(fixtures.h3(1, 1, -1))
    with pytest.raises(NullDistinguished):
        distinguished_period(A, D, A.vector({"e1": 1, "e2": 1}))
    A, D = setup(fixtures.h3null())
    with pytest.raises(DegenerateCenter):
        distinguished_period(A, D, A.vector({"u": 1}))


def test_central_translation_rigidity():
    # a rotation geodesic closes up centrally after one turn and is then translated for all t
    A, D = setup(fixtures.h3())
    v = A.vector({"z": F(3, 5), "e1": F(4, 5)})
    S = build_geodesic(A, D, v)
    lam = float(np.abs(np.linalg.eigvals(S.J_matrix).imag).max())
    omega = 2 * math.pi / lam
    phi = eval_geodesic(S, omega).log
    assert np.abs(phi[1:]).max() < 1e-12
    residual, fixed = translation_residual(A, D, phi, v, omega)
    assert residual <= 1e-10 and fixed <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=4, max_size=4))
def test_flat_exact_identity(coords):
    A, D = setup(fixtures.n4flat())
    phi = q.qarray(coords)
    rec = flat_period(A, D, phi)
    sq = 2 * (phi[0] * phi[2] + phi[1] * phi[3])
    if sq == 0:
        assert rec.omega is None
    else:
        assert rec.omega_squared == abs(sq)
        obstructed = phi[0] != 0
        assert (rec.omega is None) == obstructed
        if rec.omega is not None:
            sign = 1 if sq > 0 else -1
            assert float(A.inner(rec.velocity, rec.velocity)) == pytest.approx(sign)


def test_spectrum_examples():
    lattice = LatticeSpec(((1, 0), (0, 1)))
    out = flat_torus_spectrum(lattice, [[1, 0], [0, -1]], 2)
    assert [(n, k) for _, n, k in out] == [(4, 1), (8, 3), (4, 4)]
    out = flat_torus_spectrum(LatticeSpec(((1,),)), [[1]], 3)
    assert [(w, n) for w, n, _ in out] == [(1.0, 2), (2.0, 2), (3.0, 2)]
    out = flat_torus_spectrum(lattice, [[1, 0], [0, 1]], math.sqrt(2))
    assert [(n, k) for _, n, k in out] == [(4, 1), (4, 2)]


@pytest.mark.parametrize(
    "gens, gram, bound",
    [
        (((1, 0), (0, 1)), [[1, 0], [0, -1]], 3),
        (((2, 1), (1, 1)), [[1, 0], [0, 1]], 4),
        (((1, 0, 0), (0, 1, 0), (0, 0, 1)), [[0, 1, 0], [1, 0, 0], [0, 0, 1]], 3),
        (((F(1, 2), 0), (F(1, 3), 1)), [[2, 1], [1, -1]], 2),
        (((1, 1, 0), (0, 1, 1), (1, 0, 1)), [[1, 0, 0], [0, 1, 0], [0, 0, -1]], F(5, 2)),
    ],
)
def test_spectrum_matches_brute_force(gens, gram, bound):
    lattice = LatticeSpec(gens)
    fast = flat_torus_spectrum(lattice, gram, bound)
    wide = brute_force_spectrum(lattice, gram, bound, [12] * lattice.dim)
    # every definite-box hit is a true hit, and the wide box finds nothing new for definite grams
    fast_map = {k: n for _, n, k in fast}
    wide_map = {k: n for _, n, k in wide}
    for k, n in fast_map.items():
        assert wide_map[k] >= n
    G = np.asarray(gram, dtype=float)
    if np.all(np.linalg.eigvalsh(G) > 0):
        assert fast_map == wide_map


def test_spectrum_box_is_exhaustive_for_its_own_box():
    lattice = LatticeSpec(((1, 0), (0, 1)))
    fast = flat_torus_spectrum(lattice, [[1, 0], [0, -1]], 2)
    assert fast == brute_force_spectrum(lattice, [[1, 0], [0, -1]], 2, [4, 4])


def test_lattice_validation():
    with pytest.raises(DimensionMismatch):
        LatticeSpec(((1, 2), (2, 4)))
    with pytest.raises(DimensionMismatch):
        LatticeSpec(((1, 2), (1,)))
    with pytest.raises(ParseError):
        load_lattice({"gens": []})
    lat = load_lattice({"generators": [["1/2", "0"], ["0", "1"]]})
    assert lat.generators[0][0] == F(1, 2)
    with pytest.raises(DegenerateMetric):
        flat_torus_spectrum(lat, [[1, 1], [1, 1]], 2)
    with pytest.raises(DimensionMismatch):
        flat_torus_spectrum(lat, [[1]], 2)
