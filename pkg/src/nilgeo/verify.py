"""Run the fixture catalog against the generic computations."""

from dataclasses import dataclass
from fractions import Fraction

from . import fixtures
from . import rational as q
from .algebra import j_map, load_algebra, ph_type_check, witt_decompose
from .curvature import connection_table, curvature, ricci, scalar_curvature, sectional


@dataclass(frozen=True)
class Mismatch:
    fixture: str
    tag: str
    kind: str
    args: tuple
    expected: object
    actual: object

    def describe(self):
        args = ",".join(self.args)
        return f"{self.fixture} [{self.tag}] {self.kind}({args}): expected {self.expected}, got {self.actual}"


def _vec(A, spec):
    out = q.zeros(A.dim)
    for label, value in spec.items():
        out[A.index(label)] += Fraction(value)
    return out


def _fmt_vec(A, v):
    parts = [f"{q.format_rational(c)}*{A.labels[i]}" for i, c in enumerate(v) if c != 0]
    return " + ".join(parts) or "0"


def check_case(case):
    """All mismatches for one fixture case (empty list when it reproduces)."""
    A = load_algebra(case.doc)
    D = witt_decompose(A)
    table = connection_table(A)
    tensor = curvature(A, table)
    ric = ricci(A, tensor)
    out = []
    listed = {"connection": set(), "curvature": set(), "ricci": set()}
    b = A.basis_vector

    def fail(ex, actual):
        out.append(Mismatch(case.name, ex.tag, ex.kind, ex.args, ex.value, actual))

    for ex in case.expectations:
        idx = tuple(A.index(a) for a in ex.args)
        if ex.kind == "adjoint":
            got = A.ad_dagger(b(idx[0])) @ b(idx[1])
            if any(got != _vec(A, ex.value)):
                fail(ex, _fmt_vec(A, got))
        elif ex.kind == "j":
            got = j_map(A, D, b(idx[0]))
            want = q.qarray(ex.value)
            if got.shape != want.shape or (got != want).any():
                fail(ex, got.tolist())
        elif ex.kind == "connection":
            listed["connection"].add(idx)
            got = table.nabla[idx[0], idx[1]]
            if any(got != _vec(A, ex.value)):
                fail(ex, _fmt_vec(A, got))
        elif ex.kind == "curvature":
            listed["curvature"].add(idx)
            listed["curvature"].add((idx[1], idx[0], idx[2]))
            got = tensor.R[idx]
            if any(got != _vec(A, ex.value)):
                fail(ex, _fmt_vec(A, got))
        elif ex.kind == "numerator":
            got = sectional(A, b(idx[0]), b(idx[1]), tensor).numerator
            if got != ex.value:
                fail(ex, got)
        elif ex.kind == "sectional":
            got = sectional(A, b(idx[0]), b(idx[1]), tensor).value
            if got != ex.value:
                fail(ex, got)
        elif ex.kind == "ricci":
            listed["ricci"].add(idx)
            listed["ricci"].add(idx[::-1])
            if ric[idx] != ex.value:
                fail(ex, ric[idx])
        elif ex.kind == "scalar":
            got = scalar_curvature(A, tensor)
            if got != ex.value:
                fail(ex, got)
        elif ex.kind == "ph":
            got = ph_type_check(A, D).is_ph
            if got != ex.value:
                fail(ex, got)
        elif ex.kind == "flat":
            got = tensor.is_zero()
            if got != ex.value:
                fail(ex, got)
        else:
            raise ValueError(f"unknown expectation kind {ex.kind}")

    # entries a complete listing omits must vanish
    n = A.dim
    tag = {"connection": "rest vanishing", "curvature": "rest vanishing", "ricci": "rest vanishing"}
    if "connection" in case.complete:
        for i in range(n):
            for j in range(n):
                if (i, j) not in listed["connection"] and any(table.nabla[i, j] != 0):
                    out.append(Mismatch(case.name, tag["connection"], "connection", (A.labels[i], A.labels[j]), "0", _fmt_vec(A, table.nabla[i, j])))
    if "curvature" in case.complete:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if (i, j, k) not in listed["curvature"] and any(tensor.R[i, j, k] != 0):
                        out.append(
                            Mismatch(case.name, tag["curvature"], "curvature", (A.labels[i], A.labels[j], A.labels[k]), "0", _fmt_vec(A, tensor.R[i, j, k]))
                        )
    if "ricci" in case.complete:
        for i in range(n):
            for j in range(n):
                if (i, j) not in listed["ricci"] and ric[i, j] != 0:
                    out.append(Mismatch(case.name, tag["ricci"], "ricci", (A.labels[i], A.labels[j]), "0", ric[i, j]))
    return out


def run_verification(cases=None, name_filter=None):
    """Mismatches across the catalog, optionally restricted by family or name substring."""
    cases = fixtures.catalog() if cases is None else cases
    if name_filter:
        cases = [c for c in cases if c.family == name_filter or name_filter in c.name]
    mismatches = []
    for case in cases:
        mismatches.extend(check_case(case))
    return cases, mismatches


__all__ = ["Mismatch", "check_case", "run_verification"]
