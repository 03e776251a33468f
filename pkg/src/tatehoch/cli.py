"""Command line front end.

    tatehoch validate SPEC
    tatehoch frobenius SPEC
    tatehoch hochschild SPEC --min 0 --max 4 --module A
    tatehoch tate SPEC --min -3 --max 3 --engine both
    tatehoch ring SPEC --max-deg 2 --engine stable
    tatehoch duality SPEC --range -3 3
    tatehoch check SPEC
    tatehoch cache SPEC --stats | --clear

SPEC is a path to an algebra spec file or the name of a bundled corpus
entry (dual_f5, qext_f17, ...).  Exit codes: 1 usage, 2 parse, 3 math
precondition, 4 property failure.
"""
import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import identity_automorphism, is_symmetric
from .barres import (bar_window, hochschild_cohomology, hochschild_homology, verify_bar, verify_bar_diagonal,
                     verify_composition_product)
from .bimod import outer_tensor_A, regular, shift_sequences, twist
from .errors import MathError, PropertyFailure, RadicalUnavailable, SpecError, TateError
from .specfile import load_spec

USAGE, PARSE, PRECONDITION, PROPERTY = 1, 2, 3, 4
MODULES = ("A", "AA", "K", "C", "nu", "nuinv", "nu2")


# ---------------------------------------------------------------- plumbing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def corpus_names():
    root = resources.files("tatehoch") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def resolve_spec(path):
    if os.path.exists(path):
        return path
    name = path[:-5] if path.endswith(".toml") else path
    if name in corpus_names():
        return str(resources.files("tatehoch") / "corpus" / f"{name}.toml")
    raise TateError(f"no spec file or corpus entry named {path!r}")


def cache_dir():
    return Path(os.environ.get("CACHE_DIR") or Path.home() / ".cache" / "tatehoch")


def _cache_key(digest, command, params):
    blob = json.dumps({"v": __version__, "digest": digest, "command": command, "params": params},
                      sort_keys=True)
    return f"{digest}-{hashlib.sha256(blob.encode()).hexdigest()[:20]}.json"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def module_for(spec, name):
    a, f = spec.algebra, spec.frobenius
    A = regular(a)
    one = identity_automorphism(a)
    if name == "A":
        return A
    if name == "AA":
        return outer_tensor_A(A)
    if name in ("K", "C"):
        seqs = shift_sequences(A, f)
        return seqs["K"].sub if name == "K" else seqs["C"].quot
    if name == "nu":
        return twist(A, one, f.nakayama)
    if name == "nuinv":
        return twist(A, one, f.nakayama_inv)
    if name == "nu2":
        return twist(A, one, f.nakayama.compose(f.nakayama))
    raise SpecError(f"unknown module {name!r}; choose from {', '.join(MODULES)}")


def _check(checks, name, fn):
    """Run one property check; failures are recorded, preconditions propagate."""
    try:
        detail = fn()
        checks.append({"name": name, "ok": True, "detail": _jsonable(detail)})
    except PropertyFailure as e:
        checks.append({"name": name, "ok": False, "detail": str(e)})
    except RadicalUnavailable as e:
        checks.append({"name": name, "ok": True, "skipped": True, "detail": str(e)})


# ---------------------------------------------------------------- commands

def cmd_validate(spec, args):
    a, f = spec.algebra, spec.frobenius
    res = {"dim": a.dim, "field": repr(a.field), "basis": a.labels,
           "commutative": bool(a.is_commutative()), "symmetric": is_symmetric(f)}
    return res, [], (["key", "value"], [[k, v] for k, v in sorted(res.items())])


def cmd_frobenius(spec, args):
    a, f = spec.algebra, spec.frobenius
    F = a.field
    nu = f.nakayama
    res = {"dual_basis": F.to_list(f.dual_basis), "gram": F.to_list(f.gram),
           "nakayama": F.to_list(nu.matrix), "symmetric": is_symmetric(f),
           "nakayama_order": nu.order(args.order_bound)}
    rows = [[a.labels[i], " ".join(str(x) for x in F.to_list(nu.matrix[:, i]))] for i in range(a.dim)]
    return res, [], (["basis", "nu(basis)"], rows)


def cmd_hochschild(spec, args):
    a = spec.algebra
    m = module_for(spec, args.module)
    if args.min < 0 or args.max < args.min:
        raise MathError("Hochschild degrees must satisfy 0 <= min <= max")
    bar = bar_window(a, args.max + 1)
    rows, res = [], {}
    for n in range(args.min, args.max + 1):
        c = hochschild_cohomology(a, m, n, bar)
        h = hochschild_homology(a, m, n, bar)
        res[n] = {"cohomology": c.dim, "homology": h.dim,
                  "cohomology_reps": a.field.to_list(c.representatives),
                  "homology_reps": a.field.to_list(h.representatives)}
        rows.append([n, c.dim, h.dim])
    return {"module": args.module, "degrees": res}, [], (["degree", "H^n", "H_n"], rows)


def cmd_tate(spec, args):
    from .tate import syzygies, tate_cohomology, tate_homology, tate_via_stable
    a, f = spec.algebra, spec.frobenius
    m = module_for(spec, args.module)
    W = max(args.window, abs(args.min) + 1, abs(args.max) + 1)
    res, rows, checks = {}, [], []
    chain = syzygies(a, f, max(abs(args.min), abs(args.max)) + 1) if args.engine != "formula" else None
    for n in range(args.min, args.max + 1):
        entry = {}
        if args.engine in ("formula", "both"):
            entry["formula"] = [tate_cohomology(a, f, m, n, W).dim, tate_homology(a, f, m, n, W).dim]
        if args.engine in ("stable", "both"):
            entry["stable"] = [tate_via_stable(a, f, m, n, W, chain).dim,
                               tate_via_stable(a, f, m, n, W, chain, homology=True).dim]
        res[n] = entry
        best = entry.get("formula") or entry["stable"]
        rows.append([n, best[0], best[1]])
    if args.engine == "both":
        bad = [n for n, e in res.items() if e["formula"] != e["stable"]]
        checks.append({"name": "engines agree", "ok": not bad, "detail": bad})
    return {"module": args.module, "engine": args.engine, "degrees": res}, checks, \
        (["degree", "Tate H^n", "Tate H_n"], rows)


def cmd_ring(spec, args):
    from .products import Products, ring_table
    a, f = spec.algebra, spec.frobenius
    D = args.max_deg
    pr = Products(a, f, D, seed=args.seed)
    checks = []
    engines = ["stable", "diagonal"] if args.engine == "both" else [args.engine]
    tables = {}
    for e in engines:
        tables[e] = ring_table(a, f, -D, D, engine=e, pr=pr)
        checks.append({"name": f"ring axioms ({e})", "ok": True, "detail": tables[e]["checks"]})
    if len(engines) == 2:
        same = tables["stable"]["table"] == tables["diagonal"]["table"]
        checks.append({"name": "engines agree", "ok": bool(same), "detail": None})
    t = tables[engines[0]]
    rows = []
    for (i, j), block in sorted(t["table"].items()):
        nz = sum(1 for row in block for v in row if any(x != 0 for x in v))
        rows.append([i, j, len(block), len(block[0]) if block else 0, nz])
    res = {"dims": t["dims"], "table": {f"{i},{j}": v for (i, j), v in sorted(t["table"].items())},
           "engine": args.engine}
    return res, checks, (["i", "j", "dim H^i", "dim H^j", "nonzero products"], rows)


def cmd_duality(spec, args):
    from .products import duality_window, duality_map, fundamental_class, verify_dual_dimensions
    a, f = spec.algebra, spec.frobenius
    lo, hi = args.range
    if lo > hi:
        raise MathError("empty degree range")
    dw = duality_window(a, f, lo, hi)
    mods = {"A": regular(a), "K": module_for(spec, "K")}
    res, checks, rows = {"ranks": {}}, [], []
    for name, m in mods.items():
        ranks = {}
        for n in range(lo, hi + 1):
            try:
                ranks[n] = int(duality_map(a, f, m, n, dw).shape[0])
            except PropertyFailure as e:
                ranks[n] = None
                checks.append({"name": f"duality {name} degree {n}", "ok": False, "detail": str(e)})
        res["ranks"][name] = ranks
    for n in range(lo, hi + 1):
        rows.append([n, res["ranks"]["A"][n], res["ranks"]["K"][n]])
    fc = fundamental_class(a, f, dw)
    res["fundamental_class"] = {"nonzero": fc.nonzero, "coords": a.field.to_list(fc.coords)}
    _check(checks, "dual dimensions", lambda: verify_dual_dimensions(a, f, lo, hi))
    if not any(c["name"].startswith("duality") for c in checks):
        checks.append({"name": "duality full rank", "ok": True, "detail": None})
    return res, checks, (["degree", "rank (M = A)", "rank (M = K(A))"], rows)


def product_depth(a):
    """Largest product degree D whose diagonal window (W = 2D + 2) stays small."""
    return 2 if a.dim <= 3 else 1


def cmd_check(spec, args):
    from . import products as P
    from . import tate as T
    a, f = spec.algebra, spec.frobenius
    A = regular(a)
    one = identity_automorphism(a)
    W = args.window
    checks = []
    _check(checks, "bar resolution", lambda: verify_bar(bar_window(a, W)))
    _check(checks, "bar diagonal", lambda: verify_bar_diagonal(bar_window(a, 3)))
    _check(checks, "complete window", lambda: bool(T.complete_bar_window(a, f, W)))
    _check(checks, "cup equals composition product",
           lambda: _all_ok(verify_composition_product(a, 1), "composition product"))
    _check(checks, "norm sequence", lambda: T.verify_norm_sequence(a, f, A))
    chain = T.syzygies(a, f, W)
    _check(checks, "syzygies", lambda: T.verify_syzygies(chain))

    def engines():
        bad = []
        for name, m in (("A", A), ("nu", twist(A, one, f.nakayama))):
            for n in range(-(W - 1), W):
                x = (T.tate_cohomology(a, f, m, n, W).dim, T.tate_homology(a, f, m, n, W).dim)
                y = (T.tate_via_stable(a, f, m, n, W, chain).dim,
                     T.tate_via_stable(a, f, m, n, W, chain, homology=True).dim)
                if x != y:
                    bad.append((name, n, x, y))
        if bad:
            raise PropertyFailure(f"formula and stable engines disagree: {bad}")
        return True
    _check(checks, "formula and stable groups agree", engines)
    _check(checks, "weakly projective vanishing",
           lambda: T.verify_weak_projective_vanishing(a, f, outer_tensor_A(A), -(W - 1), W - 1))
    _check(checks, "dimension shift", lambda: len(T.verify_dimension_shift(a, f, A, -2, 2)))
    _check(checks, "twisted Ext", lambda: len(T.verify_twist_ext(a, f, A, A, f.nakayama)))
    _check(checks, "minimality", lambda: T.minimality_check(T.complete_bar_window(a, f, W)))
    D = product_depth(a)
    _check(checks, "product engines agree", lambda: len(P.compare_engines(a, f, D, seed=args.seed)))
    _check(checks, "ring axioms", lambda: P.ring_table(a, f, -D, D)["dims"])
    _check(checks, "duality", lambda: P.verify_duality(a, f, {"A": A, "K": module_for(spec, "K")}))
    _check(checks, "duality naturality",
           lambda: all(P.verify_duality_naturality(a, f, a.one, n) for n in (-1, 0, 1)))
    _check(checks, "dual dimensions", lambda: P.verify_dual_dimensions(a, f))
    _check(checks, "Hochschild compatibility", lambda: P.verify_compatibility(a, f, D))
    _check(checks, "cap associativity", lambda: P.verify_cap_associativity(a, f, -D, D))
    _check(checks, "connecting maps", lambda: P.verify_connecting_axioms(a, f, 1))
    rows = [[c["name"], "skip" if c.get("skipped") else ("pass" if c["ok"] else "FAIL")] for c in checks]
    return {"window": W, "product_degree": D}, checks, (["check", "result"], rows)


def _all_ok(report, what):
    bad = [r for r in report if not r[1]]
    if bad:
        raise PropertyFailure(f"{what} fails at {bad[0][0]}")
    return len(report)


def cmd_cache(spec, args):
    d = cache_dir()
    files = sorted(d.glob(f"{spec.digest}-*.json")) if d.exists() else []
    res = {"dir": str(d), "entries": len(files), "bytes": sum(p.stat().st_size for p in files)}
    if args.clear:
        for p in files:
            p.unlink()
        res["cleared"] = len(files)
    return res, [], (["key", "value"], [[k, v] for k, v in sorted(res.items())])


COMMANDS = {"validate": cmd_validate, "frobenius": cmd_frobenius, "hochschild": cmd_hochschild,
            "tate": cmd_tate, "ring": cmd_ring, "duality": cmd_duality, "check": cmd_check,
            "cache": cmd_cache}
CACHED = {"hochschild", "tate", "ring", "duality", "check"}


# ---------------------------------------------------------------- output

def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    header, rows = report["table"]["header"], report["table"]["rows"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    cells = [[str(x) for x in header]] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = [f"{report['command']}: {report['algebra']['name']} [{report['algebra']['hash']}]"]
    for k, r in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    for c in report["checks"]:
        if not c["ok"]:
            lines.append(f"FAILED: {c['name']}: {c['detail']}")
    if "timings" in report:
        lines.append(f"time: {report['timings']['seconds']:.2f}s")
    return "\n".join(lines) + "\n"


def build_parser():
    p = _Parser(prog="tatehoch", description="Hochschild and Tate-Hochschild (co)homology")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="spec file or bundled corpus name")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--window", type=int, default=None)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--timings", action="store_true", help="include wall-clock time (breaks determinism)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common])
    q = sub.add_parser("frobenius", parents=[common])
    q.add_argument("--order-bound", type=int, default=64)
    q = sub.add_parser("hochschild", parents=[common])
    q.add_argument("--min", type=int, default=0)
    q.add_argument("--max", type=int, default=4)
    q.add_argument("--module", choices=MODULES, default="A")
    q = sub.add_parser("tate", parents=[common])
    q.add_argument("--min", type=int, default=-3)
    q.add_argument("--max", type=int, default=3)
    q.add_argument("--module", choices=MODULES, default="A")
    q.add_argument("--engine", choices=("formula", "stable", "both"), default="formula")
    q = sub.add_parser("ring", parents=[common])
    q.add_argument("--max-deg", type=int, default=2)
    q.add_argument("--engine", choices=("stable", "diagonal", "both"), default="stable")
    q = sub.add_parser("duality", parents=[common])
    q.add_argument("--range", type=int, nargs=2, default=[-3, 3], metavar=("LO", "HI"))
    sub.add_parser("check", parents=[common])
    q = sub.add_parser("cache", parents=[common])
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--clear", action="store_true")
    g.add_argument("--stats", action="store_true")
    return p


def _params(args):
    skip = {"spec", "format", "output", "no_cache", "timings", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None):
    """Parse, compute and return (exit code, rendered report)."""
    args = build_parser().parse_args(argv)
    spec = load_spec(resolve_spec(args.spec))
    if args.window is None:
        args.window = int(spec.options.get("window", 4))
    if args.window < 1:
        raise SpecError("window must be positive")
    params = _params(args)
    start = time.perf_counter()
    path = None
    if args.command in CACHED and not args.no_cache:
        path = cache_dir() / _cache_key(spec.digest, args.command, params)
    if path is not None and path.exists():
        with open(path, encoding="utf-8") as fh:
            report = json.load(fh)
    else:
        res, checks, (header, rows) = COMMANDS[args.command](spec, args)
        report = _jsonable({"command": args.command, "params": params,
                            "algebra": {"name": spec.algebra.name, "hash": spec.digest},
                            "results": res, "checks": checks,
                            "table": {"header": header, "rows": rows},
                            "ok": all(c["ok"] for c in checks)})
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(report, sort_keys=True), encoding="utf-8")
            tmp.replace(path)
    if args.timings:
        report["timings"] = {"seconds": time.perf_counter() - start}
    out = render(report, args.format)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return (0 if report["ok"] else PROPERTY), out


def main(argv=None):
    try:
        code, _ = run(argv)
    except SpecError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return PARSE
    except PropertyFailure as e:
        print(f"property failure: {e}", file=sys.stderr)
        return PROPERTY
    except MathError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return PRECONDITION
    except (TateError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    return code


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
