"""nilgeo command line.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 method unavailable.
"""

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import fixtures
from . import rational as q
from .algebra import algebra_document, load_algebra, ph_type_check, witt_decompose
from .curvature import connection_table, curvature, flatness_report
from .errors import ClosedFormUnavailable, NilgeoError, ParseError
from .geodesic import build_geodesic, eval_geodesic, eval_geodesic_csgf, geodesic_rk4
from .isometry import check_family, check_isometric_automorphism, family_grids, load_map
from .lattice import (
    construct_translated,
    distinguished_period,
    flat_period,
    flat_torus_spectrum,
    load_lattice,
    translation_residual,
)
from .phbuild import build_ph_algebra, load_seed
from .verify import run_verification

OK, VERIFY_FAILED, INPUT_ERROR = 0, 1, 2

FIXTURES = {
    "h3": fixtures.h3,
    "h3null": fixtures.h3null,
    "hq": fixtures.hq,
    "h12": fixtures.h12,
    "n4flat": fixtures.n4flat,
    "n4partial": fixtures.n4partial,
    "h3xR": fixtures.h3_times_line,
    "abelian": fixtures.abelian,
    "parabolic": fixtures.parabolic,
}


def jsonable(x):
    """Fractions become 'p/q' strings, floats stay floats."""
    if isinstance(x, Fraction):
        return q.format_rational(x)
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def resolve_algebra(spec):
    """A file path, JSON text, or a built-in fixture written as name(args), e.g. hq(1,1,-1)."""
    match = re.fullmatch(r"([A-Za-z0-9]+)(?:\((.*)\))?", spec)
    if match and not Path(spec).exists() and match.group(1) in FIXTURES:
        args = [int(a) for a in match.group(2).split(",")] if match.group(2) else []
        try:
            return load_algebra(FIXTURES[match.group(1)](*args))
        except TypeError as exc:
            raise ParseError(f"bad fixture arguments in {spec!r}") from exc
    try:
        return load_algebra(spec)
    except OSError as exc:
        raise ParseError(f"cannot read {spec}: {exc.strerror}") from None


def parse_vector(text, A):
    """Comma-separated rationals in basis order, or label=value pairs."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if parts and all("=" in p for p in parts):
        return A.vector({k.strip(): v.strip() for k, v in (p.split("=", 1) for p in parts)})
    if len(parts) != A.dim:
        raise ParseError(f"expected {A.dim} comma-separated entries, got {len(parts)}")
    return q.qarray([q.parse_rational(p) for p in parts])


def _fmt_vec(A, v):
    return {A.labels[i]: jsonable(c) for i, c in enumerate(v) if c != 0}


def analysis_report(A):
    D = witt_decompose(A)
    table = connection_table(A)
    tensor = curvature(A, table)
    flat = flatness_report(A, D, tensor)
    ph = ph_type_check(A, D)
    n = A.dim
    labels = A.labels
    adapted = D.frame.labels
    return {
        "name": A.name,
        "basis": list(labels),
        "decomposition": {
            "dims": {"U": D.k, "Z": D.r, "V": D.k, "E": D.s},
            "signature": list(D.signature),
            "exactness": D.exactness_flag,
            "signs_Z": list(D.signs_Z),
            "signs_E": list(D.signs_E),
            "adapted_basis": {adapted[i]: _fmt_vec(A, D.basis[:, i]) for i in range(n)},
        },
        "connection": [
            {"x": labels[i], "y": labels[j], "value": _fmt_vec(A, table.nabla[i, j])}
            for i in range(n)
            for j in range(n)
            if any(v != 0 for v in table.nabla[i, j])
        ],
        "curvature": [
            {"x": labels[i], "y": labels[j], "w": labels[k], "value": _fmt_vec(A, tensor.R[i, j, k])}
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if any(v != 0 for v in tensor.R[i, j, k])
        ],
        "ricci": jsonable(flat.ricci),
        "scalar": jsonable(flat.scalar),
        "flat": flat.is_flat,
        "e0f_sufficient": flat.e0f_sufficient,
        "homaloidal_center": flat.homaloidal_center,
        "ph_type": ph.is_ph,
        "ph_witness": jsonable(ph.witness),
    }


def _print_text(report, indent=""):
    width = max((len(k) for k in report), default=0)
    for key, value in report.items():
        if isinstance(value, dict) and value and all(not isinstance(v, (dict, list)) for v in value.values()):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        if isinstance(value, bool):
            value = "true" if value else "false"
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_text(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for item in value:
                print(f"{indent}  " + "  ".join(f"{k}={json.dumps(v) if isinstance(v, dict) else v}" for k, v in item.items()))
        else:
            print(f"{indent}{key.ljust(width)}: {value}")


def emit(args, report):
    if args.json:
        print(json.dumps(jsonable(report)))
    else:
        _print_text(jsonable(report))


def cmd_analyze(args):
    emit(args, analysis_report(resolve_algebra(args.algebra)))
    return OK


def _times(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"bad time list {text!r}") from None


def cmd_geodesic(args):
    A = resolve_algebra(args.algebra)
    v0 = parse_vector(args.v0, A)
    times = _times(args.t)
    method = args.method
    samples = []
    if method in ("closed", "csgf", "auto"):
        D = witt_decompose(A)
        S = build_geodesic(A, D, v0)
        if S.method != "closed_form" and method != "auto":
            raise ClosedFormUnavailable(f"closed form unavailable: {S.reason}")
        if S.method == "closed_form":
            for t in times:
                samples.append(eval_geodesic_csgf(S, t) if method == "csgf" else eval_geodesic(S, t, args.quad))
        else:
            method = "rk4"
    if method == "rk4":
        for t in times:
            samples.append(geodesic_rk4(A, v0, t, args.steps, record_every=args.steps)[-1] if t else geodesic_rk4(A, v0, 0.0, 1)[0])
    for s in samples:
        print(json.dumps({"t": s.t, "log": [float(v) for v in s.log], "vel": [float(v) for v in s.vel]}))
    return OK


def _period_report(A, D, phi, mode, tolerance):
    if mode == "auto":
        if D.k == 0:
            mode = "distinguished"
        else:
            try:
                return _period_report(A, D, phi, "flat", tolerance)
            except NilgeoError:
                mode = "construct"
    if mode == "flat":
        rec = flat_period(A, D, phi)
        out = {"kind": rec.kind, "omega": rec.omega, "omega_squared": rec.omega_squared, "causal": rec.causal.value}
        if rec.reason:
            out["reason"] = rec.reason
        if rec.omega is not None:
            res, fixed = translation_residual(A, D, phi, rec.velocity, rec.omega)
            out.update(velocity=rec.velocity, residual=res, verified=res <= tolerance)
        return out
    if mode == "distinguished":
        rec = distinguished_period(A, D, phi)
        built = construct_translated(A, D, phi)
        res, fixed = translation_residual(A, D, phi, built["velocity"], built["omega_star"], base=built["xi"])
        return {
            "kind": rec.kind,
            "omega": rec.omega,
            "omega_squared": rec.omega_squared,
            "causal": rec.causal.value,
            "base": built["xi"],
            "velocity": built["velocity"],
            "residual": res,
            "verified": res <= tolerance and (fixed is None or fixed <= tolerance),
        }
    built = construct_translated(A, D, phi)
    res, fixed = translation_residual(A, D, phi, built["velocity"], built["omega_star"], base=built["xi"])
    return {
        "kind": "verified_numeric",
        "omega": built["omega_star"],
        "omega_squared": built["omega_star_squared"],
        "causal": built["causal"].value,
        "base": built["xi"],
        "velocity": built["velocity"],
        "residual": res,
        "verified": res <= tolerance and (fixed is None or fixed <= tolerance),
    }


def cmd_periods(args):
    A = resolve_algebra(args.algebra)
    D = witt_decompose(A)
    elements = [parse_vector(p, A) for p in args.phi or []]
    if args.lattice:
        lat = load_lattice(json.loads(Path(args.lattice).read_text()))
        elements += [q.qarray(list(g)) for g in lat.generators]
    if not elements:
        raise ParseError("give --phi or --lattice")
    status = OK
    records = []
    for phi in elements:
        rec = {"phi": _fmt_vec(A, phi)}
        rec.update(_period_report(A, D, phi, args.mode, args.tolerance))
        if rec.get("verified") is False:
            status = VERIFY_FAILED
        records.append(rec)
    if args.json:
        print(json.dumps(jsonable(records)))
    else:
        for rec in records:
            _print_text(jsonable(rec))
            print()
    return status


def _parse_matrix(text):
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        rows = [r.split(",") for r in text.split(";")]
    return [[q.parse_rational(str(v).strip()) for v in row] for row in rows]


def cmd_spectrum(args):
    lat = load_lattice(json.loads(Path(args.lattice).read_text()))
    if args.algebra:
        gram = resolve_algebra(args.algebra).gram
    elif args.gram:
        gram = _parse_matrix(args.gram)
    else:
        raise ParseError("give --gram or --algebra")
    bound = q.parse_rational(args.bound) if re.fullmatch(r"-?\d+(/\d+)?", args.bound) else float(args.bound)
    spec = flat_torus_spectrum(lat, gram, bound)
    out = [{"omega": w, "multiplicity": m} for w, m, _ in spec]
    if args.json:
        print(json.dumps(out))
    else:
        for row in out:
            print(f"{row['omega']:.12g}  x{row['multiplicity']}")
    return OK


def cmd_construct_ph(args):
    seed = load_seed(args.seed)
    A = build_ph_algebra(seed, name=args.name)
    report = ph_type_check(A, witt_decompose(A))
    doc = algebra_document(A)
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    if args.json or not args.out:
        print(json.dumps({"algebra": doc, "ph_type": report.is_ph}))
    return OK if report.is_ph else VERIFY_FAILED


def cmd_check_iso(args):
    if args.family:
        results = {}
        for name, doc, family, grid in family_grids():
            if name.split("(")[0] == args.family or name == args.family:
                results[name] = check_family(load_algebra(doc), family, grid)
        if not results:
            raise ParseError(f"unknown family {args.family!r}")
        emit(args, {"families": results})
        return OK if all(results.values()) else VERIFY_FAILED
    if not (args.algebra and args.map):
        raise ParseError("give ALGEBRA and --map, or --family")
    A = resolve_algebra(args.algebra)
    try:
        f = load_map(json.loads(Path(args.map).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read map: {exc}") from None
    rep = check_isometric_automorphism(A, f)
    emit(args, {"is_metric_preserving": rep.is_metric_preserving, "is_automorphism": rep.is_automorphism, "verdict": rep.verdict})
    return OK if rep.verdict else VERIFY_FAILED


def cmd_verify_paper(args):
    cases, mismatches = run_verification(name_filter=args.filter)
    if not cases:
        raise ParseError(f"no fixture matches {args.filter!r}")
    count = sum(len(c.expectations) for c in cases)
    if args.json:
        print(json.dumps({"cases": len(cases), "expectations": count, "mismatches": [m.describe() for m in mismatches]}))
    elif mismatches:
        print(f"{len(mismatches)} mismatch(es); first: {mismatches[0].describe()}", file=sys.stderr)
    else:
        print(f"ok: {len(cases)} cases, {count} expectations")
    return VERIFY_FAILED if mismatches else OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS, help="numeric assertion tolerance")

    parser = argparse.ArgumentParser(prog="nilgeo", description="Geometry of 2-step nilpotent metric Lie groups.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--tolerance", type=float, default=1e-8, help="numeric assertion tolerance (exact checks ignore it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="decomposition, curvature and pH verdict")
    p.add_argument("algebra", help="algebra JSON file or fixture such as h3(1,1,1)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("geodesic", parents=[common], help="geodesic samples as JSON lines")
    p.add_argument("algebra")
    p.add_argument("--v0", required=True, help="initial velocity: comma-separated rationals or label=value pairs")
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--method", choices=["auto", "closed", "csgf", "rk4"], default="auto")
    p.add_argument("--steps", type=int, default=20000, help="RK4 steps per requested time")
    p.add_argument("--quad", type=int, default=None, help="Gauss-Legendre nodes per unit time")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("periods", parents=[common], help="periods of group elements")
    p.add_argument("algebra")
    p.add_argument("--phi", action="append", help="log of the element; repeatable")
    p.add_argument("--lattice", help="lattice document whose generators are used as elements")
    p.add_argument("--mode", choices=["auto", "flat", "distinguished", "construct"], default="auto")
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("spectrum", parents=[common], help="flat torus length spectrum")
    p.add_argument("lattice")
    p.add_argument("--gram", help="JSON matrix or rows separated by ';'")
    p.add_argument("--algebra", help="take the gram matrix from this algebra")
    p.add_argument("--bound", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("construct-ph", parents=[common], help="build a pH-type algebra from a seed")
    p.add_argument("seed")
    p.add_argument("--name", default="ph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct_ph)

    p = sub.add_parser("check-iso", parents=[common], help="isometric automorphism check")
    p.add_argument("algebra", nargs="?")
    p.add_argument("--map")
    p.add_argument("--family", help="run a built-in family grid: d3d, d422 or d4os")
    p.set_defaults(func=cmd_check_iso)

    p = sub.add_parser("verify-paper", parents=[common], help="run the built-in worked-example suite")
    p.add_argument("--filter", help="family name (h3, hq, ...) or case-name substring")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NilgeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness:
            print(f"witness: {json.dumps(jsonable(witness))}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
