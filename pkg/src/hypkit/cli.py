"""Command-line front end.

Every subcommand writes JSON (sorted keys) or CSV with a leading comment
line that carries the library version and the seed, so identical input
gives byte-identical output. Exit status: 0 success, 1 domain error (a JSON
object on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import random
import sys

from . import __version__
from .bilip import CSV_HEADER, AnnulusShearSpec, TrirectangleMap, certify_annulus, certify_trirectangle
from .errors import HypkitError
from .hypcore import INF, BoundaryPoint, Mobius, geodesic
from .incompress import CaseConfig, case_check
from .isometry import (
    GParams,
    SearchConfig,
    default_xm,
    hex_h_quantities,
    hexagon_h_build,
    octagon_generators,
    tr_length_gap_mp,
    word_ball_search,
)
from .pants import complex_twist
from .polygons import NearlySymmetricSpec, nearly_symmetric_estimates
from .tiling import (
    FlowVector,
    QuotientComplex,
    TilesetGraph,
    TilingMorphism,
    build_periodic_tiling,
    find_positive_flow,
    integerize,
    is_positive_flow,
    lift_to_tree,
    tiling_to_flow,
    verify_tiling,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class DomainFailure(Exception):
    """Raised inside a command to exit 1 with a payload."""

    def __init__(self, code: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.extra = extra


# ---------------------------------------------------------------- parsing helpers


def parse_complex(x) -> complex:
    if isinstance(x, dict):
        if x.get("inf"):
            raise ValueError("infinity is not a complex number here")
        return complex(float(x.get("re", 0.0)), float(x.get("im", 0.0)))
    if isinstance(x, str):
        return complex(x.replace(" ", "").replace("i", "j"))
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def parse_point(x):
    if isinstance(x, dict) and x.get("inf"):
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "oo", "infinity"):
        return INF
    return BoundaryPoint(parse_complex(x))


def parse_geodesic(x):
    if isinstance(x, dict):
        return geodesic(parse_point(x["start"]), parse_point(x["end"]))
    u, v = x
    return geodesic(parse_point(u), parse_point(v))


def cjson(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _complex_list(s: str):
    return [parse_complex(t) for t in s.split(",") if t.strip()]


def _float_list(s: str):
    return [float(t) for t in s.split(",") if t.strip()]


def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------- output


class Output:
    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.buf = io.StringIO()

    def header(self) -> dict:
        return {"hypkit_version": __version__, "seed": self.args.seed, "command": self.command}

    def json(self, result):
        doc = dict(self.header())
        doc["result"] = result
        self.buf.write(json.dumps(doc, indent=2, sort_keys=True))
        self.buf.write("\n")

    def json_lines(self, records):
        self.buf.write(json.dumps(self.header(), sort_keys=True) + "\n")
        for r in records:
            self.buf.write(json.dumps(r, sort_keys=True) + "\n")

    def csv(self, columns, rows):
        h = self.header()
        self.buf.write(f"# hypkit {h['hypkit_version']} seed={h['seed']} command={h['command']}\n")
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(x) for x in r])

    def flush(self):
        text = self.buf.getvalue()
        if self.args.out:
            with open(self.args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _cell(x):
    if isinstance(x, float):
        return repr(x)
    return x


# ---------------------------------------------------------------- hexsolve


def cmd_hexsolve(args, out: Output):
    cfg = _load_json(args.input) if args.input else {}
    Ls = cfg.get("L", None)
    if args.L is not None:
        Ls = _float_list(args.L)
    if Ls is None:
        raise DomainFailure("MissingInput", "give L with --L or in the input file")
    if not isinstance(Ls, list):
        Ls = [float(Ls)]
    rho = cfg.get("rho", [0, 0, 0])
    if args.rho is not None:
        rho = _complex_list(args.rho)
    rho = [parse_complex(r) for r in rho]
    if len(rho) != 3:
        raise DomainFailure("BadInput", "rho needs three entries rho1, rho3, rho5")
    eps = float(cfg.get("eps", 0.0) if args.eps is None else args.eps)
    if eps == 0.0:
        eps = max(abs(r) for r in rho)
    cols = ["L", "rho1", "rho3", "rho5"]
    for k in (2, 4, 6):
        cols += [f"G{k}_exact_re", f"G{k}_exact_im", f"G{k}_est_re", f"G{k}_est_im",
                 f"G{k}_abs_error", f"G{k}_ratio"]
    cols.append("max_ratio")
    rows = []
    for L in Ls:
        spec = NearlySymmetricSpec(float(L), rho[0], rho[1], rho[2], eps)
        bad = spec.violations()
        if bad:
            raise DomainFailure("HypothesisViolated", "; ".join(bad), L=L)
        w = spec.hexagon()
        est = nearly_symmetric_estimates(spec)
        scale = math.exp(-3 * float(L) / 4)
        row = [float(L)] + [str(complex(r)) for r in rho]
        worst = 0.0
        for k in (2, 4, 6):
            ex = complex(w[k])
            es = complex(getattr(est, f"G{k}"))
            err = abs(ex - es)
            ratio = err / scale
            worst = max(worst, ratio)
            row += [ex.real, ex.imag, es.real, es.imag, err, ratio]
        row.append(worst)
        rows.append(row)
    out.csv(cols, rows)


# ---------------------------------------------------------------- isocheck


def _gparams(d):
    return GParams(float(d["L"]), parse_complex(d.get("T", 0)), parse_complex(d.get("nu", 0)),
                   float(d.get("delta", 0.0)), float(d.get("theta", 0.0)))


def _rel(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(b), 1e-300)


def identity_rows(p, tol):
    """(name, lhs, rhs, rel_error, ok) for the exact identities of hexagon H at p."""
    X, M = default_xm(p.L)
    q = hex_h_quantities(p, X, M)
    H = hexagon_h_build(p, X, M)
    rows = []
    lhs = cmath.cosh(complex(H.width(2)))
    rhs = -q.N1 / q.N2
    rows.append(("cosh_H2", lhs, rhs))
    lhs = cmath.cosh(complex(H.h4_endpoint_width()))
    rhs = (q.N1 / q.N2) * cmath.cosh(M) + 0.5 * cmath.sinh(M) * q.Z
    rows.append(("cosh_H4", lhs, rhs))
    rows.append(("f0_f1", H.f0.z * H.f1.z, complex(X) ** 2))
    rows.append(("N1sq_minus_N2sq_over_D", q.N1sq_minus_N2sq / q.D, q.identity_closed_form(p)))
    out = []
    for name, a, b in rows:
        r = _rel(a, b)
        out.append((name, a, b, r, r <= tol))
    gap = tr_length_gap_mp(p)
    ratio = gap / math.exp(-p.L)
    out.append(("tr_length_gap_over_exp_minus_L", complex(gap), complex(math.exp(-p.L)), ratio, ratio <= 100))
    return out


def _random_params(rng, L, eps, That):
    return GParams(
        L,
        complex(rng.uniform(-That, That), rng.uniform(-eps, eps)),
        complex(rng.uniform(-eps, eps), rng.uniform(-eps, eps)) / math.sqrt(2),
        rng.uniform(0.1 * eps, eps),
        rng.uniform(-eps, eps),
    )


def cmd_isocheck(args, out: Output):
    tol = args.tol if args.tol is not None else 1e-8
    if args.twist:
        return _isocheck_twist(args, out, tol)
    params = []
    if args.input:
        data = _load_json(args.input)
        items = data if isinstance(data, list) else [data]
        params = [_gparams(d) for d in items]
    if args.random:
        if args.L is None:
            raise DomainFailure("MissingInput", "--random needs --L")
        rng = random.Random(args.seed)
        for L in _float_list(args.L):
            params += [_random_params(rng, L, args.eps, args.That) for _ in range(args.random)]
    if not params:
        raise DomainFailure("MissingInput", "give a GParams JSON file or --random N --L ...")
    cols = ["draw", "L", "identity", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_error", "ok"]
    rows = []
    for i, p in enumerate(params):
        for name, a, b, r, ok in identity_rows(p, tol):
            a, b = complex(a), complex(b)
            rows.append([i, float(p.L), name, a.real, a.imag, b.real, b.imag, float(r), "1" if ok else "0"])
    out.csv(cols, rows)


def _isocheck_twist(args, out, tol):
    d = _load_json(args.twist)
    axis = parse_geodesic(d["axis"])
    m1, m2 = parse_geodesic(d["m1"]), parse_geodesic(d["m2"])
    curve = parse_geodesic(d["curve"]) if "curve" in d else None
    length = parse_complex(d["length"]) if "length" in d else None
    t = complex_twist(axis, m1, m2, length=length, curve=curve,
                      injective=bool(d.get("injective", True)), tol=max(tol, 1e-9))
    res = {"defined": t.defined, "reason": t.reason, "sign": t.sign}
    if t.defined:
        res["twist0"] = cjson(t.twist0)
        res["twist"] = cjson(t.twist)
    if t.length is not None:
        res["length"] = cjson(t.length)
    out.json(res)


# ---------------------------------------------------------------- isosearch


def _mobius(m):
    if isinstance(m, dict):
        m = [[m["a"], m["b"]], [m["c"], m["d"]]]
    (a, b), (c, d) = m
    return Mobius(parse_complex(a), parse_complex(b), parse_complex(c), parse_complex(d))


def cmd_isosearch(args, out: Output):
    if args.octagon:
        names, mats = octagon_generators()
        cfg = SearchConfig(mats, L=8.0, eps=0.3, That=30.0, max_word_length=12, names=names)
        data = {}
    else:
        if not args.input:
            raise DomainFailure("MissingInput", "give a SearchConfig JSON file or --octagon")
        data = _load_json(args.input)
        gens = [_mobius(g) for g in data["generators"]]
        names = data.get("names")
        if data.get("add_inverses"):
            gens = [x for g in gens for x in (g, g.inverse())]
            if names:
                names = [x for n in names for x in (n, n.upper() if n.upper() != n else n + "^-1")]
        cfg = SearchConfig(
            gens,
            A=_mobius(data["A"]) if "A" in data else Mobius.identity(),
            L=float(data.get("L", 8.0)),
            eps=float(data.get("eps", 0.3)),
            That=float(data.get("That", 3.0)),
            max_word_length=int(data.get("max_word_length", 12)),
            trace_window=data.get("trace_window"),
            names=names,
            radius_slack=data.get("radius_slack"),
        )
    for key in ("L", "eps", "That", "max_word_length"):
        v = getattr(args, key if key != "max_word_length" else "max_length", None)
        if v is not None:
            setattr(cfg, key, type(getattr(cfg, key))(v))
    hits = word_ball_search(cfg)
    out.json_lines({"word": h.word_str(), "params": h.params.as_dict(), "tr_length": cjson(h.tr_length)}
                   for h in hits)


# ---------------------------------------------------------------- tile


def _tileset(path):
    return TilesetGraph.from_json(_load_json(path))


def _tiling(path):
    d = _load_json(path)
    return QuotientComplex.from_json(d["quotient"]), TilingMorphism.from_json(d["morphism"])


def cmd_tile(args, out: Output):
    Y = _tileset(args.graph)
    if args.action == "find-flow":
        f = find_positive_flow(Y)
        if not f:
            raise DomainFailure("Infeasible", "no positive flow",
                                certificate=[f"{x.numerator}/{x.denominator}" for x in f.certificate])
        Z = integerize(f)
        out.json({"flow": Z.to_json(Y), "normalized": f.to_json(Y)})
    elif args.action == "build":
        if not args.flow:
            raise DomainFailure("MissingInput", "tile build needs --flow")
        Z = FlowVector.from_json(_load_json(args.flow), Y)
        if not is_positive_flow(Y, Z):
            raise DomainFailure("NotAFlow", "input is not a positive flow")
        Z = integerize(Z)
        Q, m = build_periodic_tiling(Y, Z)
        out.json({"quotient": Q.to_json(), "morphism": m.to_json(), "flow": tiling_to_flow(Q, m, Y).to_json(Y)})
    elif args.action == "verify":
        if not args.tiling:
            raise DomainFailure("MissingInput", "tile verify needs --tiling")
        Q, m = _tiling(args.tiling)
        ok, bad = verify_tiling(Q, m, Y)
        if not ok:
            raise DomainFailure("InvalidTiling", "tiling violates the local conditions", violations=bad)
        out.json({"ok": True, "violations": [], "flow": tiling_to_flow(Q, m, Y).to_json(Y)})
    elif args.action == "lift":
        if not args.tiling:
            raise DomainFailure("MissingInput", "tile lift needs --tiling")
        Q, m = _tiling(args.tiling)
        ball = lift_to_tree(Q, m, args.basepoint, args.radius, Y)
        out.json(ball.to_json(Y))


# ---------------------------------------------------------------- bilip


def cmd_bilip(args, out: Output):
    data = _load_json(args.input) if args.input else {}

    def get(name, default=None):
        v = getattr(args, name, None)
        return data.get(name, default) if v is None else v

    n = int(get("n", 200))
    if args.kind == "trirect":
        L, tau, rho = get("L"), get("tau", 0.0), get("rho", 0.0)
        if L is None:
            raise DomainFailure("MissingInput", "trirect needs L")
        F = TrirectangleMap(float(L), float(tau), float(rho))
        certs = certify_trirectangle(F, n)
    else:
        l, t, w = get("l"), get("t", 0.0), get("w")
        if l is None or w is None:
            raise DomainFailure("MissingInput", "annulus needs l and w")
        Lv, E = get("L"), get("E")
        spec = AnnulusShearSpec(float(l), float(t), float(w),
                                None if Lv is None else float(Lv), None if E is None else float(E))
        certs = certify_annulus(spec, n)
    out.csv(CSV_HEADER, [c.as_row() for c in certs])


# ---------------------------------------------------------------- incompress


def cmd_incompress(args, out: Output):
    ids = range(1, 10) if args.case_id == "all" else [int(args.case_id)]
    reports = []
    for k in ids:
        cfg = CaseConfig(k, args.L, args.eps, args.That)
        reports.append(case_check(cfg).as_dict())
    out.json(reports[0] if len(reports) == 1 else reports)


# ---------------------------------------------------------------- argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps (recorded in output)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = _Parser(prog="hypkit", description="hyperbolic geometry toolkit")
    p.add_argument("--version", action="version", version=f"hypkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("hexsolve", parents=[common], help="nearly symmetric hexagons vs their estimates")
    s.add_argument("input", nargs="?", help='JSON {"L": ..., "rho": [...], "eps": ...}')
    s.add_argument("--L", help="comma-separated L values")
    s.add_argument("--rho", help="rho1,rho3,rho5 (complex allowed, e.g. 0.01+0.002j)")
    s.add_argument("--eps", type=float)
    s.set_defaults(func=cmd_hexsolve)

    s = sub.add_parser("isocheck", parents=[common], help="identity and asymptotic residuals for g")
    s.add_argument("input", nargs="?", help="JSON GParams (or a list of them)")
    s.add_argument("--random", type=int, default=0, help="number of random draws per L")
    s.add_argument("--L", help="comma-separated L values for --random")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--That", type=float, default=1.0)
    s.add_argument("--twist", help="JSON with axis, m1, m2 [, length, curve]: print the complex twist")
    s.set_defaults(func=cmd_isocheck)

    s = sub.add_parser("isosearch", parents=[common], help="word-ball search for near-g elements")
    s.add_argument("input", nargs="?", help="SearchConfig JSON with generator matrices")
    s.add_argument("--octagon", action="store_true", help="use the built-in genus-2 octagon group")
    s.add_argument("--L", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--That", type=float)
    s.add_argument("--max-length", dest="max_length", type=int)
    s.set_defaults(func=cmd_isosearch)

    s = sub.add_parser("tile", parents=[common], help="flows and tilings of tileset graphs")
    s.add_argument("action", choices=["find-flow", "build", "verify", "lift"])
    s.add_argument("graph", help="tileset graph JSON")
    s.add_argument("--flow", help="flow JSON (for build)")
    s.add_argument("--tiling", help="tiling JSON (for verify, lift)")
    s.add_argument("--radius", type=int, default=2)
    s.add_argument("--basepoint", type=int, default=0)
    s.set_defaults(func=cmd_tile)

    s = sub.add_parser("bilip", parents=[common], help="bi-Lipschitz certificates")
    s.add_argument("kind", choices=["trirect", "annulus"])
    s.add_argument("input", nargs="?", help="JSON parameters")
    for name in ("L", "tau", "rho", "l", "t", "w", "E"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_bilip)

    s = sub.add_parser("incompress", parents=[common], help="altitude-plane disjointness cases")
    s.add_argument("action", choices=["case"])
    s.add_argument("case_id", help="1..9 or all")
    s.add_argument("--L", type=float, default=30.0)
    s.add_argument("--eps", type=float, default=0.01)
    s.add_argument("--That", type=float, default=1.0)
    s.set_defaults(func=cmd_incompress)
    return p


def _fail(code, message, **extra):
    payload = {"error": code, "message": message}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_DOMAIN


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    out = Output(args, args.command + (f" {args.action}" if hasattr(args, "action") else "")
                 + (f" {args.kind}" if hasattr(args, "kind") else ""))
    try:
        args.func(args, out)
    except DomainFailure as exc:
        return _fail(exc.code, str(exc), **exc.extra)
    except HypkitError as exc:
        return _fail(type(exc).__name__, str(exc))
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        return _fail(type(exc).__name__, str(exc))
    out.flush()
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
