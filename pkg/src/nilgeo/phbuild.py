"""Build a pH-type algebra from an inner product and a j-map.

Seed coordinates follow the adapted order u, z, v, e.  On that basis the
companion form <x, iota y> is the Euclidean dot product, so every identity
below reduces to plain matrix algebra over the rationals.
"""

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import rational as q
from .algebra import NilAlgebra
from .errors import ParseError, SeedInvalid

RANDOM_CHECKS = 50
RANDOM_SEED = 20240615


def block_labels(prefix, count):
    if count == 1:
        return [prefix]
    return [f"{prefix}{i + 1}" for i in range(count)]


@dataclass(frozen=True, eq=False)
class PhSeed:
    dim_U: int
    dim_Z: int
    dim_E: int
    signs_Z: tuple
    signs_E: tuple
    j_matrices: tuple

    @property
    def central_labels(self):
        return block_labels("u", self.dim_U) + block_labels("z", self.dim_Z)

    @property
    def outer_labels(self):
        return block_labels("v", self.dim_U) + block_labels("e", self.dim_E)

    @property
    def outer_dim(self):
        return self.dim_U + self.dim_E


def _signs(values, count, name):
    values = tuple(int(v) for v in values)
    if len(values) != count or any(v not in (1, -1) for v in values):
        raise ParseError(f"{name} must list {count} entries of +1 or -1")
    return values


def make_seed(dim_U, dim_Z, dim_E, signs_Z, signs_E, j):
    """``j`` maps central labels (or positions) to square matrices on V+E."""
    for name, v in (("dimU", dim_U), ("dimZ", dim_Z), ("dimE", dim_E)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ParseError(f"{name} must be a nonnegative integer")
    shell = PhSeed(dim_U, dim_Z, dim_E, _signs(signs_Z, dim_Z, "signsZ"), _signs(signs_E, dim_E, "signsE"), ())
    m = shell.outer_dim
    labels = shell.central_labels
    if isinstance(j, dict):
        unknown = set(j) - set(labels)
        if unknown:
            raise ParseError(f"j given for unknown central labels {sorted(unknown)}")
        missing = [lab for lab in labels if lab not in j]
        if missing:
            raise ParseError(f"j missing for central labels {missing}")
        raw = [j[lab] for lab in labels]
    else:
        raw = list(j)
        if len(raw) != len(labels):
            raise ParseError(f"expected {len(labels)} j matrices, got {len(raw)}")
    mats = []
    for lab, mat in zip(labels, raw):
        arr = q.qarray([[q.parse_rational(v) if isinstance(v, str) else q.parse_rational(str(v)) for v in row] for row in mat]) if m else q.zeros(0, 0)
        if arr.shape != (m, m):
            raise ParseError(f"j({lab}) must be {m}x{m}")
        mats.append(arr)
    return PhSeed(shell.dim_U, shell.dim_Z, shell.dim_E, shell.signs_Z, shell.signs_E, tuple(mats))


def load_seed(doc):
    if isinstance(doc, (str, Path)) and not str(doc).lstrip().startswith("{"):
        doc = Path(doc).read_text()
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"seed is not valid JSON: {exc}") from None
    try:
        return make_seed(doc["dimU"], doc["dimZ"], doc["dimE"], doc.get("signsZ", []), doc.get("signsE", []), doc["j"])
    except KeyError as exc:
        raise ParseError(f"seed document missing {exc}") from None


def _fmt(v):
    return [q.format_rational(x) for x in v]


def _random_vectors(rng, dim, count):
    return [q.qarray([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dim)]) for _ in range(count)]


def verify_seed(seed):
    """Raise SeedInvalid naming the first identity that fails."""
    js = seed.j_matrices
    m = seed.outer_dim
    I = q.eye(m)
    labels = seed.central_labels
    for p, jp in enumerate(js):
        if not (jp @ jp == -I).all():
            raise SeedInvalid(f"j({labels[p]})^2 != -<a, iota a> I", "id-2", {"a": labels[p]})
    for p in range(len(js)):
        for r in range(p + 1, len(js)):
            if not (js[p] @ js[r] + js[r] @ js[p] == 0 * I).all():
                raise SeedInvalid(
                    f"j({labels[p]}) and j({labels[r]}) do not anticommute",
                    "id-2 polarized",
                    {"a": labels[p], "b": labels[r]},
                )
    for p, jp in enumerate(js):
        if not (jp.T + jp == 0 * I).all():
            raise SeedInvalid(f"j({labels[p]}) is not iota-skewsymmetric", "iota-skew", {"a": labels[p]})
    # (id-1): |j(a)x|^2 = |a|^2 |x|^2 in the companion norm
    rng = random.Random(RANDOM_SEED)
    pairs = [(q.unit(len(js), p), q.unit(m, c)) for p in range(len(js)) for c in range(m)]
    if js and m:
        pairs += list(zip(_random_vectors(rng, len(js), RANDOM_CHECKS), _random_vectors(rng, m, RANDOM_CHECKS)))
    for a, x in pairs:
        ja = sum((a[p] * js[p] for p in range(len(js))), q.zeros(m, m))
        y = ja @ x
        if y @ y != (a @ a) * (x @ x):
            raise SeedInvalid("|j(a)x|^2 != |a|^2 |x|^2", "id-1", {"a": _fmt(a), "x": _fmt(x)})


def build_ph_algebra(seed, name="ph"):
    """Bracket on V+E with coefficient of central a_p in [x, y] equal to <j(a_p)x, iota y>."""
    verify_seed(seed)
    k, r, s = seed.dim_U, seed.dim_Z, seed.dim_E
    c = k + r
    m = seed.outer_dim
    n = c + m
    bracket = q.zeros(n, n, n)
    for p, jp in enumerate(seed.j_matrices):
        # entry [y, x] of j_p is the companion pairing of j_p x with y
        bracket[c:, c:, p] = jp.T
    gram = q.zeros(n, n)
    for i in range(k):
        gram[i, c + i] = gram[c + i, i] = Fraction(1)
    for a, sign in enumerate(seed.signs_Z):
        gram[k + a, k + a] = Fraction(sign)
    for a, sign in enumerate(seed.signs_E):
        gram[c + k + a, c + k + a] = Fraction(sign)
    labels = seed.central_labels + seed.outer_labels
    return NilAlgebra(labels, bracket, gram, name=name)


def seed_document(seed):
    return {
        "dimU": seed.dim_U,
        "dimZ": seed.dim_Z,
        "dimE": seed.dim_E,
        "signsZ": list(seed.signs_Z),
        "signsE": list(seed.signs_E),
        "j": {lab: [[q.format_rational(v) for v in row] for row in mat] for lab, mat in zip(seed.central_labels, seed.j_matrices)},
    }


__all__ = ["PhSeed", "block_labels", "build_ph_algebra", "load_seed", "make_seed", "seed_document", "verify_seed"]
