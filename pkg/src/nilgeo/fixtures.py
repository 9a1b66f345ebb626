"""Built-in worked examples and the values they are expected to produce.

Every fixture is a function of its sign parameters returning an algebra
document; the matching ``*_expectations`` function lists the exact values
the geometry must reproduce for those signs.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import rational as q

F = Fraction
HALF = F(1, 2)
QUARTER = F(1, 4)
THREE_Q = F(3, 4)


def _doc(name, basis, brackets, metric):
    return {
        "name": name,
        "basis": list(basis),
        "brackets": [{"x": x, "y": y, "out": {k: q.format_rational(v) for k, v in out.items()}} for x, y, out in brackets],
        "metric": [{"a": a, "b": b, "value": q.format_rational(v)} for a, b, v in metric],
    }


def h3(eps=1, eb1=1, eb2=1):
    return _doc(
        f"h3({eps},{eb1},{eb2})",
        ["z", "e1", "e2"],
        [("e1", "e2", {"z": 1})],
        [("z", "z", eps), ("e1", "e1", eb1), ("e2", "e2", eb2)],
    )


def h3null(eb=1):
    return _doc(f"h3null({eb})", ["u", "v", "e"], [("v", "e", {"u": 1})], [("u", "v", 1), ("e", "e", eb)])


def hq(eps=1, eb1=1, eb2=1):
    return _doc(
        f"hq({eps},{eb1},{eb2})",
        ["u1", "u2", "z", "v1", "v2", "e1", "e2"],
        [
            ("e1", "e2", {"z": 1}),
            ("v1", "v2", {"z": 1}),
            ("e1", "v1", {"u1": 1}),
            ("e2", "v1", {"u2": 1}),
            ("e1", "v2", {"u2": 1}),
            ("e2", "v2", {"u1": -1}),
        ],
        [("u1", "v1", 1), ("u2", "v2", 1), ("z", "z", eps), ("e1", "e1", eb1), ("e2", "e2", eb2)],
    )


def h12(eps=1, eb1=1, eb2=1):
    return _doc(
        f"h12({eps},{eb1},{eb2})",
        ["u", "z", "v", "e1", "e2"],
        [("e1", "e2", {"z": 1}), ("v", "e2", {"u": 1})],
        [("u", "v", 1), ("z", "z", eps), ("e1", "e1", eb1), ("e2", "e2", eb2)],
    )


def n4flat():
    return _doc(
        "n4flat",
        ["v1", "v2", "u1", "u2"],
        [("v1", "v2", {"u1": 1})],
        [("v1", "u1", 1), ("v2", "u2", 1)],
    )


def n4partial(eps=1, eb=1):
    return _doc(
        f"n4partial({eps},{eb})",
        ["v", "e", "z", "u"],
        [("v", "e", {"z": 1})],
        [("v", "u", 1), ("e", "e", eb), ("z", "z", eps)],
    )


def hp1(p, signs):
    """H(p,1) with null center: [v, e_{p+1}] = u and [e_i, e_{p+i}] = u for 2 <= i <= p."""
    labels = ["u", "v"] + [f"e{i}" for i in range(2, 2 * p + 1)]
    brackets = [("v", f"e{p + 1}", {"u": 1})] + [(f"e{i}", f"e{p + i}", {"u": 1}) for i in range(2, p + 1)]
    metric = [("u", "v", 1)] + [(f"e{i}", f"e{i}", signs[i]) for i in range(2, 2 * p + 1)]
    return _doc(f"H({p},1)", labels, brackets, metric)


def abelian(n=3, signs=None):
    signs = signs or [1] * n
    labels = [f"x{i + 1}" for i in range(n)]
    return _doc(f"abelian{n}", labels, [], [(x, x, s) for x, s in zip(labels, signs)])


def h3_times_line(eps=1, eb1=1, eb2=1, sign=1):
    doc = h3(eps, eb1, eb2)
    doc["name"] = "h3xR"
    doc["basis"].append("w")
    doc["metric"].append({"a": "w", "b": "w", "value": str(sign)})
    return doc


def parabolic():
    """E of signature (+,+,-) where z0 = z gives J a null kernel spanned by e1 + e3."""
    return _doc(
        "parabolic",
        ["z", "w", "e1", "e2", "e3"],
        [("e1", "e2", {"z": 1}), ("e2", "e3", {"z": 1}), ("e1", "e3", {"w": 1})],
        [("z", "z", 1), ("w", "w", 1), ("e1", "e1", 1), ("e2", "e2", 1), ("e3", "e3", -1)],
    )


@dataclass(frozen=True)
class Expectation:
    """One checkable value.

    kind is one of adjoint, j, connection, curvature, numerator, sectional,
    ricci, scalar, ph, flat.  ``args`` are basis labels, ``value`` a
    {label: coefficient} dict, a scalar, a matrix or a bool.  A ``complete``
    expectation group asserts that entries it does not list vanish.
    """

    fixture: str
    tag: str
    kind: str
    args: tuple
    value: object


@dataclass
class Case:
    name: str
    family: str
    doc: dict
    expectations: list = field(default_factory=list)
    complete: set = field(default_factory=set)


def _h3_common(name, e, b1, b2):
    E = []
    add = lambda tag, kind, args, value: E.append(Expectation(name, tag, kind, args, value))
    add("h3", "adjoint", ("e1", "z"), {"e2": e * b2})
    add("h3", "adjoint", ("e2", "z"), {"e1": -e * b1})
    add("h3c", "connection", ("z", "e1"), {"e2": -HALF * e * b2})
    add("h3c", "connection", ("e1", "z"), {"e2": -HALF * e * b2})
    add("h3c", "connection", ("z", "e2"), {"e1": HALF * e * b1})
    add("h3c", "connection", ("e2", "z"), {"e1": HALF * e * b1})
    add("h3c", "connection", ("e1", "e2"), {"z": HALF})
    add("h3c", "connection", ("e2", "e1"), {"z": -HALF})
    add("h3cc", "curvature", ("z", "e1", "z"), {"e1": -QUARTER * b1 * b2})
    add("h3cc", "curvature", ("z", "e2", "z"), {"e2": -QUARTER * b1 * b2})
    add("h3cc", "curvature", ("z", "e1", "e1"), {"z": QUARTER * e * b2})
    add("h3cc", "curvature", ("z", "e2", "e2"), {"z": QUARTER * e * b1})
    add("h3cc", "curvature", ("e1", "e2", "e1"), {"e2": THREE_Q * e * b2})
    add("h3cc", "curvature", ("e1", "e2", "e2"), {"e1": -THREE_Q * e * b1})
    add("h3sc", "sectional", ("z", "e1"), QUARTER * e * b1 * b2)
    add("h3sc", "sectional", ("z", "e2"), QUARTER * e * b1 * b2)
    add("h3sc", "sectional", ("e1", "e2"), -THREE_Q * e * b1 * b2)
    add("h3rics", "ricci", ("z", "z"), HALF * b1 * b2)
    add("h3rics", "ricci", ("e1", "e1"), -HALF * e * b2)
    add("h3rics", "ricci", ("e2", "e2"), -HALF * e * b1)
    add("h3rics", "scalar", (), -HALF * e * b1 * b2)
    return E


def h3_case(e, b1, b2):
    name = f"h3({e},{b1},{b2})"
    E = _h3_common(name, e, b1, b2)
    E.append(Expectation(name, "h3", "j", ("z",), [[0, -1], [1, 0]]))
    E.append(Expectation(name, "h3", "ph", (), True))
    E.append(Expectation(name, "h3cc", "flat", (), False))
    return Case(name, "h3", h3(e, b1, b2), E, {"connection", "curvature", "ricci"})


def h3null_case(b):
    name = f"h3null({b})"
    E = []
    add = lambda tag, kind, args, value: E.append(Expectation(name, tag, kind, args, value))
    add("h3n", "adjoint", ("v", "v"), {"e": b})
    add("h3n", "adjoint", ("e", "v"), {"u": -1})
    add("h3n", "j", ("u",), [[0, -1], [1, 0]])
    add("h3n", "ph", (), True)
    add("h3nc", "connection", ("v", "v"), {"e": -b})
    add("h3nc", "connection", ("v", "e"), {"u": 1})
    add("h3ncc", "flat", (), True)
    add("h3nrics", "scalar", (), F(0))
    return Case(name, "h3null", h3null(b), E, {"connection", "curvature", "ricci"})


def hq_case(e, b1, b2):
    name = f"hq({e},{b1},{b2})"
    E = []
    add = lambda tag, kind, args, value: E.append(Expectation(name, tag, kind, args, value))
    for x, a, val in [
        ("v1", "z", {"u2": e}),
        ("v1", "v1", {"e1": -b1}),
        ("v1", "v2", {"e2": -b2}),
        ("v2", "z", {"u1": -e}),
        ("v2", "v1", {"e2": b2}),
        ("v2", "v2", {"e1": -b1}),
        ("e1", "z", {"e2": e * b2}),
        ("e1", "v1", {"u1": 1}),
        ("e1", "v2", {"u2": 1}),
        ("e2", "z", {"e1": -e * b1}),
        ("e2", "v1", {"u2": -1}),
        ("e2", "v2", {"u1": 1}),
    ]:
        add("hq", "adjoint", (x, a), val)
    add("hq", "j", ("u1",), [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]])
    add("hq", "j", ("u2",), [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
    add("hq", "j", ("z",), [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    add("hq", "ph", (), True)
    for x, y, val in [
        ("z", "v1", {"u2": -HALF * e}),
        ("v1", "z", {"u2": -HALF * e}),
        ("z", "v2", {"u1": HALF * e}),
        ("v2", "z", {"u1": HALF * e}),
        ("z", "e1", {"e2": -HALF * e * b2}),
        ("e1", "z", {"e2": -HALF * e * b2}),
        ("z", "e2", {"e1": HALF * e * b1}),
        ("e2", "z", {"e1": HALF * e * b1}),
        ("v1", "v1", {"e1": b1}),
        ("v1", "v2", {"z": HALF}),
        ("v2", "v1", {"z": -HALF}),
        ("v2", "v2", {"e1": b1}),
        ("v1", "e1", {"u1": -1}),
        ("v2", "e1", {"u2": -1}),
        ("e2", "v1", {"u2": 1}),
        ("e2", "v2", {"u1": -1}),
        ("e1", "e2", {"z": HALF}),
        ("e2", "e1", {"z": -HALF}),
    ]:
        add("hqc", "connection", (x, y), val)
    for x, y, w, val in [
        ("z", "v1", "v1", {"e2": -HALF * e * b1 * b2}),
        ("z", "v1", "e2", {"u1": HALF * e * b1}),
        ("z", "v2", "v2", {"e2": -HALF * e * b1 * b2}),
        ("z", "v2", "e2", {"u2": HALF * e * b1}),
        ("v1", "v2", "v1", {"u2": b1 + THREE_Q * e}),
        ("v1", "v2", "v2", {"u1": -(b1 + THREE_Q * e)}),
        ("v1", "v2", "e1", {"e2": HALF * e * b2}),
        ("v1", "v2", "e2", {"e1": -HALF * e * b1}),
        ("v1", "e2", "v2", {"e1": -QUARTER * e * b1}),
        ("v2", "e1", "v1", {"e2": -QUARTER * e * b2}),
        ("v2", "e2", "z", {"u2": -HALF * e * b1}),
        ("v2", "e2", "v1", {"e1": QUARTER * e * b1}),
        ("v2", "e2", "v2", {"z": HALF * b1}),
        ("v2", "e2", "e1", {"u1": -QUARTER * e}),
        ("z", "e1", "z", {"e1": -QUARTER * b1 * b2}),
        ("z", "e1", "e1", {"z": QUARTER * e * b2}),
        ("z", "e2", "z", {"e2": -QUARTER * b1 * b2}),
        ("z", "e2", "e2", {"z": QUARTER * e * b1}),
        ("v1", "e1", "v2", {"e2": QUARTER * e * b2}),
        ("v1", "e1", "e2", {"u2": -QUARTER * e}),
        ("v1", "e2", "z", {"u1": -HALF * e * b1}),
        ("v1", "e2", "v1", {"z": HALF * b1}),
        ("v1", "e2", "e1", {"u2": QUARTER * e}),
        ("v2", "e1", "e2", {"u1": QUARTER * e}),
        ("e1", "e2", "v1", {"u2": HALF * e}),
        ("e1", "e2", "v2", {"u1": -HALF * e}),
        ("e1", "e2", "e1", {"e2": THREE_Q * e * b2}),
        ("e1", "e2", "e2", {"e1": -THREE_Q * e * b1}),
    ]:
        add("hqcc", "curvature", (x, y, w), val)
    add("hqsc", "numerator", ("v1", "v2"), -(b1 + THREE_Q * e))
    for v in ("v1", "v2"):
        for a in ("e1", "e2"):
            add("hqsc", "numerator", (v, a), F(0))
        add("hqsc", "numerator", ("z", v), F(0))
    add("hqsc", "sectional", ("z", "e1"), QUARTER * e * b1 * b2)
    add("hqsc", "sectional", ("z", "e2"), QUARTER * e * b1 * b2)
    add("hqsc", "sectional", ("e1", "e2"), -THREE_Q * e * b1 * b2)
    add("hqrics", "ricci", ("z", "z"), HALF * b1 * b2)
    add("hqrics", "ricci", ("e1", "e1"), -HALF * e * b2)
    add("hqrics", "ricci", ("e2", "e2"), -HALF * e * b1)
    add("hqrics", "scalar", (), -HALF * e * b1 * b2)
    return Case(name, "hq", hq(e, b1, b2), E, {"connection", "curvature", "ricci"})


def h12_case(e, b1, b2):
    name = f"h12({e},{b1},{b2})"
    E = []
    add = lambda tag, kind, args, value: E.append(Expectation(name, tag, kind, args, value))
    add("h12", "adjoint", ("v", "v"), {"e2": b2})
    add("h12", "adjoint", ("e2", "v"), {"u": -1})
    add("h12", "adjoint", ("e1", "z"), {"e2": e * b2})
    add("h12", "adjoint", ("e2", "z"), {"e1": -e * b1})
    add("h12", "j", ("u",), [[0, 0, -1], [0, 0, 0], [1, 0, 0]])
    add("h12", "j", ("z",), [[0, 0, 0], [0, 0, -1], [0, 1, 0]])
    add("h12", "ph", (), False)
    for x, y, val in [
        ("z", "e1", {"e2": -HALF * e * b2}),
        ("e1", "z", {"e2": -HALF * e * b2}),
        ("z", "e2", {"e1": HALF * e * b1}),
        ("e2", "z", {"e1": HALF * e * b1}),
        ("v", "v", {"e2": -b2}),
        ("v", "e2", {"u": 1}),
        ("e1", "e2", {"z": HALF}),
        ("e2", "e1", {"z": -HALF}),
    ]:
        add("h12c", "connection", (x, y), val)
    for x, y, w, val in [
        ("z", "v", "v", {"e1": -HALF * e * b1 * b2}),
        ("z", "v", "e1", {"u": HALF * e * b2}),
        ("z", "e1", "z", {"e1": -QUARTER * b1 * b2}),
        ("z", "e1", "e1", {"z": QUARTER * e * b2}),
        ("z", "e2", "z", {"e2": -QUARTER * b1 * b2}),
        ("z", "e2", "e2", {"z": QUARTER * e * b1}),
        ("v", "e1", "z", {"u": -HALF * e * b2}),
        ("v", "e1", "v", {"z": HALF * b2}),
        ("e1", "e2", "e1", {"e2": THREE_Q * e * b2}),
        ("e1", "e2", "e2", {"e1": -THREE_Q * e * b1}),
    ]:
        add("h12cc", "curvature", (x, y, w), val)
    for a in ("e1", "e2"):
        add("h12sc", "numerator", ("v", a), F(0))
    add("h12sc", "numerator", ("z", "v"), F(0))
    add("h12sc", "sectional", ("z", "e1"), QUARTER * e * b1 * b2)
    add("h12sc", "sectional", ("z", "e2"), QUARTER * e * b1 * b2)
    add("h12sc", "sectional", ("e1", "e2"), -THREE_Q * e * b1 * b2)
    add("h12rics", "ricci", ("z", "z"), HALF * b1 * b2)
    add("h12rics", "ricci", ("e1", "e1"), -HALF * e * b2)
    add("h12rics", "ricci", ("e2", "e2"), -HALF * e * b1)
    add("h12rics", "scalar", (), -HALF * e * b1 * b2)
    return Case(name, "h12", h12(e, b1, b2), E, {"connection", "curvature", "ricci"})


def n4flat_case():
    name = "n4flat"
    E = [
        Expectation(name, "e0f", "flat", (), True),
        Expectation(name, "scalf", "scalar", (), F(0)),
    ]
    return Case(name, "n4flat", n4flat(), E, set())


def n4partial_case(e, b):
    name = f"n4partial({e},{b})"
    E = []
    add = lambda tag, kind, args, value: E.append(Expectation(name, tag, kind, args, value))
    add("n4", "adjoint", ("v", "z"), {"e": e * b})
    add("n4", "adjoint", ("e", "z"), {"u": -e})
    for x, y, val in [
        ("v", "e", {"z": HALF}),
        ("e", "v", {"z": -HALF}),
        ("z", "v", {"e": -HALF * e * b}),
        ("v", "z", {"e": -HALF * e * b}),
        ("z", "e", {"u": HALF * e}),
        ("e", "z", {"u": HALF * e}),
    ]:
        add("n4", "connection", (x, y), val)
    add("n4", "numerator", ("z", "v"), QUARTER * b)
    add("n4", "numerator", ("v", "e"), -THREE_Q * e)
    add("n4", "flat", (), False)
    return Case(name, "n4partial", n4partial(e, b), E, {"connection"})


SIGNS = (1, -1)


def catalog():
    """All fixture cases, expanded over every sign assignment."""
    cases = []
    for e, b1, b2 in itertools.product(SIGNS, repeat=3):
        cases.append(h3_case(e, b1, b2))
    for b in SIGNS:
        cases.append(h3null_case(b))
    for e, b1, b2 in itertools.product(SIGNS, repeat=3):
        cases.append(hq_case(e, b1, b2))
    for e, b1, b2 in itertools.product(SIGNS, repeat=3):
        cases.append(h12_case(e, b1, b2))
    cases.append(n4flat_case())
    for e, b in itertools.product(SIGNS, repeat=2):
        cases.append(n4partial_case(e, b))
    return cases


# isometry families, matrices on the declared basis order (column convention)


def d3d(eb, sign, a2):
    a2 = F(a2)
    s = sign
    return q.qarray([[s, 0, 0], [a2, 1, 0], [-s * eb * a2 * a2 / 2, -s * eb * a2, s]])


def d3d_metric(eb):
    return _doc(f"h3null-veu({eb})", ["v", "e", "u"], [("v", "e", {"u": 1})], [("v", "u", 1), ("e", "e", eb)])


def d422(a1, a2, b3):
    a1, a2, b3 = F(a1), F(a2), F(b3)
    return q.qarray(
        [
            [a1, 0, 0, 0],
            [a2, 1 / a1**2, 0, 0],
            [a1**2 * a2 * b3, b3, 1 / a1, -a1 * a2],
            [-(a1**3) * b3, 0, 0, a1**2],
        ]
    )


def d4os(branch, sign, a2, eb):
    """Basis [v, e, z, u].  Entry (u, e) is -f_vv * f_ee * eb * a2, which keeps
    <f v, f e> = 0 on both branches and both signs."""
    a2 = F(a2)
    s = sign
    second = s if branch == 1 else -s
    zz = 1 if branch == 1 else -1
    return q.qarray(
        [
            [s, 0, 0, 0],
            [a2, second, 0, 0],
            [0, 0, zz, 0],
            [-s * eb * a2 * a2 / 2, -s * second * eb * a2, 0, s],
        ]
    )


def d4os_printed(branch, sign, a2, eb):
    """The same family with the (u, e) entry tied to the outer sign, -sign * eb * a2."""
    f = d4os(branch, sign, a2, eb)
    f[3, 1] = -sign * eb * F(a2)
    return f
