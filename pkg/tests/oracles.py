"""Independent oracles used by the tests.

Nothing here calls into nilgeo's geometry code: these routines start from raw
structure constants and a Gram matrix given in adapted order u, z, v, e.
"""

import random
from fractions import Fraction

import sympy

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class Frame:
    """Plain-list model of an adapted metric 2-step algebra."""

    def __init__(self, bracket, gram, dims):
        self.n = len(gram)
        self.c = [[[Fraction(bracket[i][j][k]) for k in range(self.n)] for j in range(self.n)] for i in range(self.n)]
        self.g = [[Fraction(v) for v in row] for row in gram]
        inv = sympy.Matrix(self.g).inv()
        self.ginv = [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.n)] for i in range(self.n)]
        k, r, _, s = dims
        self.blocks = {
            "U": range(0, k),
            "Z": range(k, k + r),
            "V": range(k + r, 2 * k + r),
            "E": range(2 * k + r, self.n),
        }

    def zero(self):
        return [Fraction(0)] * self.n

    def unit(self, i):
        v = self.zero()
        v[i] = Fraction(1)
        return v

    def add(self, *vs):
        return [sum(col, Fraction(0)) for col in zip(*vs)]

    def scale(self, a, v):
        return [a * x for x in v]

    def lie(self, x, y):
        out = self.zero()
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        for k in range(self.n):
                            out[k] += xi * yj * self.c[i][j][k]
        return out

    def inner(self, x, y):
        return sum((x[i] * self.g[i][j] * y[j] for i in range(self.n) for j in range(self.n)), Fraction(0))

    def dagger(self, y, w):
        """ad†_y w, from <ad†_y w, t> = <w, [y, t]>."""
        n = self.n
        gw = [sum((self.g[k][l] * w[l] for l in range(n) if w[l]), Fraction(0)) for k in range(n)]
        a = [Fraction(0)] * n
        for i, yi in enumerate(y):
            if yi:
                for t in range(n):
                    a[t] += yi * sum((self.c[i][t][k] * gw[k] for k in range(n) if gw[k]), Fraction(0))
        return [sum((self.ginv[i][t] * a[t] for t in range(n) if a[t]), Fraction(0)) for i in range(n)]

    def K(self, w, y):
        """iota j(iota w) y, which equals ad†_y w."""
        return self.dagger(y, w)

    def proj(self, name, v):
        keep = set(self.blocks[name])
        return [x if i in keep else Fraction(0) for i, x in enumerate(v)]

    def block_of(self, i):
        for name, rng in self.blocks.items():
            if i in rng:
                return name
        raise IndexError(i)


def block_curvature(F, x, y, w):
    """R(b_x, b_y) b_w from the block formulas, for basis indices x, y, w."""
    bx, by, bw = F.block_of(x), F.block_of(y), F.block_of(w)
    X, Y, W = F.unit(x), F.unit(y), F.unit(w)
    if "U" in (bx, by, bw):
        return F.zero()
    order = {"Z": 0, "V": 1, "E": 2}
    if order[bx] > order[by]:
        return F.scale(-1, block_curvature(F, y, x, w))
    K, L, PE, PZ, add, sc = F.K, F.lie, lambda v: F.proj("E", v), lambda v: F.proj("Z", v), F.add, F.scale
    q4, h2, m4 = QUARTER, HALF, -QUARTER
    key = (bx, by, bw)
    if key == ("Z", "Z", "Z"):
        return F.zero()
    if bx == "Z" and by == "Z":
        z, zp, xx = X, Y, W
        return sc(q4, add(K(z, PE(K(zp, xx))), sc(-1, K(zp, PE(K(z, xx))))))
    if bx == "Z" and bw == "Z":
        z, xx, zp = X, Y, W
        return sc(q4, K(z, PE(K(zp, xx))))
    if key == ("Z", "V", "V"):
        z, v, vp = X, Y, W
        return sc(q4, add(L(v, K(z, vp)), K(z, PE(K(v, vp))), sc(-1, K(v, PE(K(z, vp)))), K(z, PE(K(vp, v)))))
    if key == ("Z", "V", "E"):
        z, v, e = X, Y, W
        return sc(q4, add(L(v, K(z, e)), K(z, PE(K(v, e))), sc(-1, K(v, PE(K(z, e))))))
    if key == ("Z", "E", "V"):
        z, e, v = X, Y, W
        return sc(q4, add(L(e, K(z, v)), K(z, PE(K(v, e)))))
    if key == ("Z", "E", "E"):
        z, e, ep = X, Y, W
        return sc(q4, L(e, K(z, ep)))
    if key == ("V", "V", "Z"):
        v, vp, z = X, Y, W
        return sc(m4, add(L(K(z, v), vp), L(v, K(z, vp)), sc(-1, K(v, PE(K(z, vp)))), K(vp, PE(K(z, v)))))
    if key == ("V", "V", "V"):
        v, vp, vpp = X, Y, W
        inner = add(
            L(v, add(K(vp, vpp), K(vpp, vp))),
            sc(-1, L(vp, add(K(v, vpp), K(vpp, v)))),
            sc(-1, K(PZ(L(v, vpp)), vp)),
            K(PZ(L(vp, vpp)), v),
            sc(-1, K(v, PE(K(vp, vpp)))),
            K(vp, PE(K(v, vpp))),
            sc(-1, K(v, PE(K(vpp, vp)))),
            K(vp, PE(K(vpp, v))),
        )
        return add(sc(m4, inner), sc(h2, K(PZ(L(v, vp)), vpp)))
    if key == ("V", "V", "E"):
        v, vp, e = X, Y, W
        inner = add(
            L(K(v, e), vp),
            L(v, K(vp, e)),
            sc(-1, K(PZ(L(v, e)), vp)),
            K(PZ(L(vp, e)), v),
            sc(-1, K(v, PE(K(vp, e)))),
            K(vp, PE(K(v, e))),
        )
        return add(sc(m4, inner), sc(h2, K(PZ(L(v, vp)), e)))
    if key == ("V", "E", "Z"):
        v, e, z = X, Y, W
        return sc(m4, add(L(v, K(z, e)), L(K(z, v), e), sc(-1, K(v, PE(K(z, e))))))
    if key == ("V", "E", "V"):
        v, e, vp = X, Y, W
        inner = add(
            L(v, K(vp, e)),
            L(add(K(v, vp), K(vp, v)), e),
            sc(-1, K(PZ(L(v, vp)), e)),
            sc(-1, K(PZ(L(vp, e)), v)),
            sc(-1, K(v, PE(K(vp, e)))),
        )
        return add(sc(m4, inner), sc(h2, K(PZ(L(v, e)), vp)))
    if key == ("V", "E", "E"):
        v, e, ep = X, Y, W
        inner = add(L(e, K(v, ep)), K(PZ(L(v, ep)), e), sc(-1, K(PZ(L(e, ep)), v)))
        return add(sc(q4, inner), sc(h2, K(PZ(L(v, e)), ep)))
    if key == ("E", "E", "Z"):
        e, ep, z = X, Y, W
        return sc(m4, add(L(e, K(z, ep)), L(K(z, e), ep)))
    if key == ("E", "E", "V"):
        e, ep, v = X, Y, W
        inner = add(L(e, K(v, ep)), L(K(v, e), ep), K(PZ(L(v, e)), ep), sc(-1, K(PZ(L(v, ep)), e)))
        return add(sc(m4, inner), sc(h2, K(PZ(L(e, ep)), v)))
    if key == ("E", "E", "E"):
        e, ep, epp = X, Y, W
        inner = add(K(PZ(L(e, epp)), ep), sc(-1, K(PZ(L(ep, epp)), e)))
        return add(sc(q4, inner), sc(h2, K(PZ(L(e, ep)), epp)))
    raise AssertionError(f"no block formula for {key}")


def block_tensor(F):
    n = F.n
    return [[[block_curvature(F, i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]


def koszul_connection(F):
    """nabla_{b_i} b_j = ([b_i,b_j] - ad†_{b_i} b_j - ad†_{b_j} b_i) / 2."""
    n = F.n
    return [
        [F.scale(HALF, F.add(F.lie(F.unit(i), F.unit(j)), F.scale(-1, F.dagger(F.unit(i), F.unit(j))), F.scale(-1, F.dagger(F.unit(j), F.unit(i)))))
         for j in range(n)]
        for i in range(n)
    ]


def random_adapted_doc(rng, max_dim=8, name="random"):
    """Random adapted algebra document: standard u/v pairing, signed z and e, rational brackets into U+Z."""
    while True:
        k = rng.randint(0, 2)
        r = rng.randint(0 if k else 1, 2)
        s = rng.randint(0 if k else 2, max_dim - 2 * k - r)
        if 2 * k + r + s > max_dim or k + s == 0:
            continue
        labels = [f"u{i + 1}" for i in range(k)] + [f"z{i + 1}" for i in range(r)] + [f"v{i + 1}" for i in range(k)] + [f"e{i + 1}" for i in range(s)]
        central = labels[: k + r]
        outer = labels[k + r :]
        brackets = []
        for a in range(len(outer)):
            for b in range(a + 1, len(outer)):
                out = {}
                for cl in central:
                    if rng.random() < 0.5:
                        val = Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2]))
                        if val:
                            out[cl] = str(val)
                if out:
                    brackets.append({"x": outer[a], "y": outer[b], "out": out})
        metric = [{"a": f"u{i + 1}", "b": f"v{i + 1}", "value": "1"} for i in range(k)]
        metric += [{"a": f"z{i + 1}", "b": f"z{i + 1}", "value": str(rng.choice([1, -1]))} for i in range(r)]
        metric += [{"a": f"e{i + 1}", "b": f"e{i + 1}", "value": str(rng.choice([1, -1]))} for i in range(s)]
        doc = {"name": name, "basis": labels, "brackets": brackets, "metric": metric}
        if _center_is_u_plus_z(doc, k + r):
            return doc, (k, r, k, s)


def _center_is_u_plus_z(doc, central_dim):
    labels = doc["basis"]
    n = len(labels)
    pos = {s: i for i, s in enumerate(labels)}
    # rows: coefficient of b_k in [x, b_j] as a linear function of x
    M = sympy.zeros(n * n, n)
    for entry in doc["brackets"]:
        i, j = pos[entry["x"]], pos[entry["y"]]
        for lab, val in entry["out"].items():
            k = pos[lab]
            M[j * n + k, i] += sympy.Rational(val)
            M[i * n + k, j] -= sympy.Rational(val)
    # need the brackets onto central labels to cover every needed central direction too
    used = {pos[lab] for e in doc["brackets"] for lab in e["out"]}
    return n - M.rank() == central_dim and used == set(range(central_dim))


def seeded(seed):
    return random.Random(seed)
