"""The algebra spec file format (TOML).

    [algebra]
    name = "dual numbers"
    field = "F5"
    basis = ["1", "x"]
    table = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]   # table[i][j] = coords of u_i u_j

    [frobenius]
    functional = [0, 1]

    [options]          # optional
    window = 4
    engine = "stable"
"""
import hashlib
import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

try:
    import tomllib as tomli
except ImportError:  # Python 3.10
    import tomli

from .algebra import Algebra, field_from_name, frobenius
from .errors import SpecError


@dataclass(eq=False)
class AlgebraSpec:
    algebra: Algebra
    frobenius: object
    options: dict = dc_field(default_factory=dict)
    digest: str = ""


def _line_of(text, key):
    pat = re.compile(rf"^\s*{re.escape(key)}\s*=", re.M)
    m = pat.search(text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _scalar(x, text, key):
    if isinstance(x, bool):
        raise SpecError(f"{key}: booleans are not scalars", _line_of(text, key))
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SpecError(f"{key}: cannot read {x!r} as an exact scalar", _line_of(text, key))


def load_spec_text(text):
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        m = re.search(r"line (\d+)", str(e))
        raise SpecError(f"TOML syntax error: {e}", int(m.group(1)) if m else None)
    alg = data.get("algebra")
    if not isinstance(alg, dict):
        raise SpecError("missing [algebra] table")
    for key in ("field", "basis", "table"):
        if key not in alg:
            raise SpecError(f"[algebra] is missing key {key!r}")
    try:
        F = field_from_name(alg["field"])
    except (ValueError, TypeError) as e:
        raise SpecError(f"field: {e}", _line_of(text, "field"))
    basis = alg["basis"]
    if not isinstance(basis, list) or not basis or not all(isinstance(b, str) for b in basis):
        raise SpecError("basis must be a non-empty list of names", _line_of(text, "basis"))
    n = len(basis)
    table = alg["table"]
    ok = (isinstance(table, list) and len(table) == n
          and all(isinstance(r, list) and len(r) == n for r in table)
          and all(isinstance(c, list) and len(c) == n for r in table for c in r))
    if not ok:
        raise SpecError(f"table must be a {n}x{n}x{n} nested list", _line_of(text, "table"))
    rows = [[[_scalar(x, text, "table") for x in c] for c in r] for r in table]
    try:
        a = Algebra(F, F.array(rows), basis, str(alg.get("name", "")))
    except ZeroDivisionError as e:
        raise SpecError(f"table entry not defined over {F!r}: {e}", _line_of(text, "table"))
    fro = data.get("frobenius")
    if not isinstance(fro, dict) or "functional" not in fro:
        raise SpecError("missing [frobenius] functional")
    lam = fro["functional"]
    if not isinstance(lam, list) or len(lam) != n:
        raise SpecError(f"functional must list {n} scalars", _line_of(text, "functional"))
    lam = [_scalar(x, text, "functional") for x in lam]
    f = frobenius(a, F.array(lam))
    opts = dict(data.get("options", {}))
    if "window" in opts and (not isinstance(opts["window"], int) or opts["window"] < 1):
        raise SpecError("window must be a positive integer", _line_of(text, "window"))
    if "engine" in opts and opts["engine"] not in ("stable", "diagonal", "formula", "both"):
        raise SpecError(f"unknown engine {opts['engine']!r}", _line_of(text, "engine"))
    digest = spec_digest(F, rows, lam)
    return AlgebraSpec(a, f, opts, digest)


def spec_digest(F, rows, lam):
    canon = json.dumps({"field": repr(F), "table": [[[str(x) for x in c] for c in r] for r in rows],
                        "functional": [str(x) for x in lam]}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}")
    return load_spec_text(text)


def dump_spec(a, lam, options=None):
    """Render an algebra and functional back to spec-file text."""
    F = a.field
    def fmt(x):
        v = F.to_list(x)
        return f'"{v}"' if isinstance(v, str) else str(v)
    lines = ["[algebra]", f'name = "{a.name}"', f'field = "{F!r}"',
             "basis = [" + ", ".join(f'"{b}"' for b in a.labels) + "]", "table = ["]
    for i in range(a.dim):
        row = ", ".join("[" + ", ".join(fmt(x) for x in a.table[i, j]) + "]" for j in range(a.dim))
        lines.append(f"  [{row}],")
    lines.append("]")
    lines += ["", "[frobenius]", "functional = [" + ", ".join(fmt(x) for x in lam) + "]"]
    if options:
        lines += ["", "[options]"]
        for k, v in sorted(options.items()):
            lines.append(f'{k} = "{v}"' if isinstance(v, str) else f"{k} = {v}")
    return "\n".join(lines) + "\n"
