"""Isometric automorphisms of a metric Lie algebra, checked exactly."""

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fixtures
from . import rational as q
from .errors import DimensionMismatch, ParseError


@dataclass(frozen=True)
class IsometryReport:
    is_metric_preserving: bool
    is_automorphism: bool

    @property
    def verdict(self):
        return self.is_metric_preserving and self.is_automorphism


def load_map(doc):
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ParseError("map document needs a 'matrix'")
    rows = doc["matrix"]
    return q.qarray([[q.parse_rational(v) if isinstance(v, str) else Fraction(v) for v in row] for row in rows])


def check_isometric_automorphism(A, f):
    """f acts on coordinates (columns are images of basis vectors)."""
    f = q.qarray(f) if not (isinstance(f, np.ndarray) and f.dtype == object) else f
    n = A.dim
    if f.shape != (n, n):
        raise DimensionMismatch(f"map must be {n}x{n}, got {f.shape}")
    G = A.gram
    metric = bool((f.T @ G @ f == G).all())
    # f[b_i, b_j] against [f b_i, f b_j] for all pairs at once
    lhs = np.einsum("ijk,mk->ijm", A.bracket, f)
    rhs = np.einsum("ai,bj,abm->ijm", f, f, A.bracket)
    auto = bool((lhs == rhs).all())
    return IsometryReport(metric, auto)


def check_family(A, family, samples):
    """True iff every parameter tuple in ``samples`` yields an isometric automorphism."""
    return all(check_isometric_automorphism(A, family(*params)).verdict for params in samples)


RATIONAL_GRID = (0, 1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2)


def family_grids():
    """(name, algebra document, generator, parameter tuples) for each known family."""
    signs = (1, -1)
    out = []
    for eb in signs:
        out.append(
            (
                f"d3d(eb={eb})",
                fixtures.d3d_metric(eb),
                lambda sign, a2, eb=eb: fixtures.d3d(eb, sign, a2),
                list(itertools.product(signs, RATIONAL_GRID)),
            )
        )
    units = (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2))
    out.append(("d422", fixtures.n4flat(), fixtures.d422, list(itertools.product(units, (0, 1, -1), (0, 1, -1)))))
    for e, eb in itertools.product(signs, signs):
        out.append(
            (
                f"d4os(eps={e},eb={eb})",
                fixtures.n4partial(e, eb),
                lambda branch, sign, a2, eb=eb: fixtures.d4os(branch, sign, a2, eb),
                list(itertools.product((1, 2), signs, RATIONAL_GRID)),
            )
        )
    return out


__all__ = [
    "IsometryReport",
    "RATIONAL_GRID",
    "check_family",
    "check_isometric_automorphism",
    "family_grids",
    "load_map",
]
