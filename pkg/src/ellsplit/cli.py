"""Command-line front end.

Subcommands: height, check-property-s, find-dominant-projection,
enumerate-subgroups, search-sr, unbounded-run, verify-certificate,
corpus-list.  Exit codes: 0 ok, 2 verification failure, 3 budget exceeded,
4 configuration error.  Identical invocations produce byte-identical
primary outputs; anything timing-related goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import corpus, serialize
from .endo import MorphismMatrix, RING_EISENSTEIN, RING_GAUSS, RING_Z, hermite_enumerate
from .errors import (
    BudgetExceeded,
    ConfigError,
    EllsplitError,
    PrecisionUnreachable,
    VerificationError,
)
from .heights import canonical_height, naive_height
from .ideals import (
    Parameterization,
    RationalMap,
    VarietySpec,
    make_elliptic_variety,
    make_torus_variety,
    validate_variety,
)
from .poly import parse_poly
from .structure import check_property_s, find_dominant_projection
from .subgroups import TORSION, search_sr
from .unbounded import (
    UnboundedCertificate,
    find_base_point,
    generate_unbounded,
    verify_certificate,
)

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_BUDGET = 3
EXIT_CONFIG = 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: dict
    precision: float = 1e-8
    bound: float = 2.0
    levels: tuple[float, ...] = ()
    out: Optional[str] = None
    seed: int = 0
    emit_json: bool = True
    emit_csv: bool = False


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_variety(spec: str) -> VarietySpec:
    if spec.startswith("corpus:"):
        entry = corpus.load_entry(spec.split(":", 1)[1])
        if entry.variety is None:
            raise ConfigError(f"{spec} is a curve entry, not a variety")
        return entry.variety
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"variety file {spec} not found")
    data = json.loads(path.read_text())
    return variety_from_json(data)


def variety_from_json(data: dict) -> VarietySpec:
    try:
        ambient = data["ambient"]
        g = int(data["g"])
        gens = list(data["generators"])
        dim = int(data["dimension"])
    except KeyError as e:
        raise ConfigError(f"variety JSON missing field {e}") from e
    par = None
    if "parameterization" in data:
        pdata = data["parameterization"]
        names = pdata["names"]
        coords = []
        for c in pdata["coords"]:
            num = parse_poly(c["num"], names)
            den = parse_poly(c.get("den", "1"), names)
            coords.append(RationalMap(num, den))
        par = Parameterization(len(names), tuple(coords))
    if ambient == "torus":
        V = make_torus_variety(
            g, gens, dim, parameterization=par,
            name=data.get("name", "user"),
            irreducible=bool(data.get("irreducible", True)),
        )
    elif ambient == "elliptic":
        E = serialize.curve_from_json(data["curve"])
        V = make_elliptic_variety(
            g, E, gens, dim, name=data.get("name", "user"),
            irreducible=bool(data.get("irreducible", True)),
        )
    else:
        raise ConfigError(f"unknown ambient {ambient!r}")
    validate_variety(V)
    return V


def _load_curve(spec: str):
    if spec.startswith("corpus:"):
        entry = corpus.load_entry(spec.split(":", 1)[1])
        if entry.curve is None:
            raise ConfigError(f"{spec} has no curve")
        return entry.curve
    path = Path(spec)
    if path.exists():
        return serialize.curve_from_json(json.loads(path.read_text()))
    # shorthand: corpus name without prefix
    entry = corpus.load_entry(spec)
    if entry.curve is None:
        raise ConfigError(f"{spec} has no curve")
    return entry.curve


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_height(args) -> int:
    E = _load_curve(args.curve)
    if args.point.startswith("{") or args.point == '"infinity"' or args.point == "infinity":
        raw = args.point if args.point != "infinity" else '"infinity"'
        pdata = json.loads(raw)
    else:
        pdata = json.loads(Path(args.point).read_text())
    P = serialize.point_from_json(pdata, E)
    method = {"local": "series", "doubling": "doubling", "both": "both", "series": "series"}[args.method]
    h = canonical_height(P, args.precision, method=method)
    nh = naive_height(P)
    out = {
        "value": h.value,
        "radius": h.radius,
        "naive": nh.value,
        "method": method,
        "precision": args.precision,
    }
    _emit(serialize.dump_deterministic(out), args.out)
    return EXIT_OK


def cmd_check_property_s(args) -> int:
    V = _load_variety(args.variety)
    rep = check_property_s(V, args.n, args.bound)
    _emit(serialize.dump_deterministic(rep.to_json()), args.out)
    return EXIT_OK


def cmd_find_dominant(args) -> int:
    V = _load_variety(args.variety)
    subset = find_dominant_projection(V)
    _emit(serialize.dump_deterministic({"coordinates": list(subset)}), args.out)
    return EXIT_OK


def cmd_enumerate_subgroups(args) -> int:
    ring = {"Z": RING_Z, "gauss": RING_GAUSS, "eisenstein": RING_EISENSTEIN}[args.ring]
    mats = list(hermite_enumerate(args.r, args.g, args.bound, ring))
    out = {
        "r": args.r,
        "g": args.g,
        "bound": args.bound,
        "count": len(mats),
        "matrices": [m.to_json() for m in mats],
    }
    _emit(serialize.dump_deterministic(out), args.out)
    return EXIT_OK


def cmd_search_sr(args) -> int:
    V = _load_variety(args.variety) if args.variety else None
    curve = _load_curve(args.curve) if args.curve else (V.curve if V else None)
    if curve is None:
        raise ConfigError("need --curve or an elliptic --variety")
    pts_data = json.loads(Path(args.points).read_text())
    points = [serialize.power_point_from_json(p, curve) for p in pts_data]
    if args.translates != "torsion":
        raise ConfigError("only the torsion translate set is wired to the CLI")
    records = search_sr(points, args.r, args.bound, TORSION, variety=V)
    rows = [
        {
            "point": serialize.power_point_to_json(r.point),
            "certificate": r.certificate.phi.to_json(),
            "r": r.r_achieved,
            "evidence": r.evidence,
        }
        for r in records
    ]
    if args.csv:
        _emit_records_csv(rows, args.out)
    else:
        _emit(serialize.dump_deterministic({"records": rows}), args.out)
    return EXIT_OK


def _emit_records_csv(rows: list[dict], out: Optional[str]) -> None:
    import io

    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["point", "certificate", "r", "evidence"])
    for r in rows:
        w.writerow([json.dumps(r["point"]), json.dumps(r["certificate"]), r["r"], r["evidence"]])
    _emit(buf.getvalue().rstrip("\n"), out)


def cmd_unbounded_run(args) -> int:
    if not args.variety.startswith("corpus:"):
        raise ConfigError("unbounded-run needs a corpus fibration (e.g. corpus:CxE)")
    entry = corpus.load_entry(args.variety.split(":", 1)[1])
    if entry.fibration is None:
        raise ConfigError(f"{args.variety} carries no fibration data")
    fib = entry.fibration
    levels = [float(x) for x in args.N.split(",")]
    base = find_base_point(fib, args.bound, args.precision)
    certs = generate_unbounded(fib, base, levels, count=args.count, precision=args.precision)
    rows = []
    all_ok = True
    for c in certs:
        problems = verify_certificate(c, fib.variety, args.precision)
        ok = not problems
        all_ok = all_ok and ok
        rows.append(
            {
                "N": c.level,
                "coefficients": list(c.coefficients),
                "point": serialize.power_point_to_json(c.point),
                "seminorm": c.measured.value,
                "radius": c.measured.radius,
                "bound": c.bound_value.value,
                "verified": ok,
            }
        )
    if args.out and args.out.endswith(".csv"):
        import io

        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["N", "coefficients", "point", "seminorm", "radius", "bound", "verified"])
        for r in rows:
            w.writerow(
                [
                    r["N"],
                    json.dumps(r["coefficients"]),
                    json.dumps(r["point"]),
                    repr(r["seminorm"]),
                    repr(r["radius"]),
                    repr(r["bound"]),
                    r["verified"],
                ]
            )
        _emit(buf.getvalue().rstrip("\n"), args.out)
    else:
        _emit(serialize.dump_deterministic({"rows": rows}), args.out)
    if args.cert_out:
        payload = {
            "variety": args.variety,
            "certificates": [c.to_json() for c in certs],
        }
        Path(args.cert_out).write_text(serialize.dump_deterministic(payload) + "\n")
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_verify_certificate(args) -> int:
    data = json.loads(Path(args.certificate).read_text())
    entry = corpus.load_entry(data["variety"].split(":", 1)[1])
    V = entry.variety
    E = entry.curve
    failures = []
    for cdata in data["certificates"]:
        cert = _certificate_from_json(cdata, E)
        problems = verify_certificate(cert, V, args.precision)
        failures += problems
    out = {"certificates": len(data["certificates"]), "problems": failures}
    _emit(serialize.dump_deterministic(out), args.out)
    return EXIT_OK if not failures else EXIT_VERIFY


def _certificate_from_json(cdata: dict, E) -> UnboundedCertificate:
    from .heights import HeightValue

    point = serialize.power_point_from_json(cdata["point"], E)
    phi1 = MorphismMatrix.from_json(cdata["phi1"])
    phi2 = MorphismMatrix.from_json(cdata["phi2"])
    pi = MorphismMatrix.from_json(cdata["pi"])
    assembled = MorphismMatrix.from_json(cdata["assembled"])
    return UnboundedCertificate(
        point=point,
        phi1=phi1,
        phi2=phi2,
        pi=pi,
        assembled=assembled,
        rank_assembled=int(cdata["rank"]),
        level=float(cdata["N"]),
        k=int(cdata["k"]),
        zk_norm=HeightValue(cdata["zk_norm"]["value"], cdata["zk_norm"]["radius"]),
        measured=HeightValue(cdata["seminorm"]["value"], cdata["seminorm"]["radius"]),
        coefficients=tuple(cdata["coefficients"]),
    )


def cmd_corpus_list(args) -> int:
    rows = []
    for name in corpus.corpus_names():
        entry = corpus.load_entry(name)
        rows.append(
            {
                "name": name,
                "kind": "variety" if entry.variety else "curve",
                "ambient": entry.variety.ambient if entry.variety else None,
                "dimension": entry.variety.dimension if entry.variety else None,
                "fibration": entry.fibration is not None,
                "note": entry.note,
            }
        )
    _emit(serialize.dump_deterministic({"corpus": rows}), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# argument wiring
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ellsplit",
        description="splitness checks and certified unbounded-height points on powers of an elliptic curve",
    )
    ap.add_argument(
        "--cache-dir",
        default=os.environ.get("ELLSPLIT_CACHE_DIR"),
        help="directory for default artifacts (env: ELLSPLIT_CACHE_DIR)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--precision", type=float, default=1e-8)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("height", help="canonical height of a point")
    p.add_argument("--curve", required=True, help="corpus:NAME or curve JSON file")
    p.add_argument("--point", required=True, help='point JSON (inline or file), e.g. {"x":"0","y":"0"}')
    p.add_argument("--method", choices=["doubling", "local", "both", "series"], default="local")
    common(p)
    p.set_defaults(fn=cmd_height)

    p = sub.add_parser("check-property-s", help="bounded surjection-stability verdict")
    p.add_argument("--variety", required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--bound", type=float, default=1.0)
    common(p)
    p.set_defaults(fn=cmd_check_property_s)

    p = sub.add_parser("find-dominant-projection", help="lex-first dominant coordinate subset")
    p.add_argument("--variety", required=True)
    common(p)
    p.set_defaults(fn=cmd_find_dominant)

    p = sub.add_parser("enumerate-subgroups", help="canonical subgroup matrices up to a bound")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--bound", type=float, default=1.0)
    p.add_argument("--ring", choices=["Z", "gauss", "eisenstein"], default="Z")
    common(p)
    p.set_defaults(fn=cmd_enumerate_subgroups)

    p = sub.add_parser("search-sr", help="membership search over sample points")
    p.add_argument("--variety", default=None)
    p.add_argument("--curve", default=None)
    p.add_argument("--points", required=True, help="JSON file: list of point tuples")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--bound", type=float, default=2.0)
    p.add_argument("--translates", default="torsion")
    p.add_argument("--csv", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_search_sr)

    p = sub.add_parser("unbounded-run", help="generate unbounded-height certificates")
    p.add_argument("--variety", required=True, help="corpus:CxE")
    p.add_argument("--curve", default=None, help="ignored; the corpus entry fixes the curve")
    p.add_argument("--N", required=True, help="comma-separated levels, e.g. 2,4,8")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--bound", type=float, default=2.0)
    p.add_argument("--cert-out", default=None, help="write full certificates JSON here")
    common(p)
    p.set_defaults(fn=cmd_unbounded_run)

    p = sub.add_parser("verify-certificate", help="re-check a certificate file from scratch")
    p.add_argument("certificate")
    common(p)
    p.set_defaults(fn=cmd_verify_certificate)

    p = sub.add_parser("corpus-list", help="list built-in examples")
    common(p)
    p.set_defaults(fn=cmd_corpus_list)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    if args.cache_dir:
        os.environ["ELLSPLIT_CACHE_DIR"] = args.cache_dir
    try:
        return args.fn(args)
    except (ConfigError, ValueError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceeded, PrecisionUnreachable) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except EllsplitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(main())
