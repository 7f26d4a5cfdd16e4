"""Command-line front end.

Every command prints one JSON response
``{"v": 1, "ok": ..., "result": ..., "certificate": ..., "diagnostics": ...}``.
Exit status is 0 on success, 1 on a domain error or failed verification and
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import connectivity, serialize
from .errors import EnumerationTooLarge, SchemaError, TorelliError
from .lattice import LatticeIsometry, QuadLattice, Sublattice, enumerate_norm_vectors, integral_kernel, make_catalog
from .period import PeriodPoint, PositiveConeRef, picard_lattice, random_generic_period, random_period
from .scalar import QQ, FVector, NumberField, field_by_name
from .twistor import check_generic, genericize, line_through
from .verify import verify_chain
from . import weyl

FIELD_DIR_ENV = "HKTORELLI_FIELD_DIR"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def load_json(arg: str):
    """A path to a JSON file, '-' for stdin, or an inline JSON list/object."""
    try:
        if arg.lstrip().startswith(("[", "{")):
            return json.loads(arg)
        if arg == "-":
            return json.load(sys.stdin)
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {arg}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{arg}: invalid JSON ({exc})") from exc


def load_field(spec: str | None) -> NumberField:
    if spec is None:
        return QQ
    if spec.endswith(".json") or os.path.sep in spec:
        return NumberField.from_json(load_json(spec))
    field_dir = os.environ.get(FIELD_DIR_ENV)
    if field_dir:
        path = Path(field_dir) / f"{spec}.json"
        if path.exists():
            return NumberField.from_json(json.loads(path.read_text()))
    try:
        return field_by_name(spec)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown field {spec!r}") from exc


def load_lattice(spec) -> QuadLattice:
    if isinstance(spec, str) and not spec.endswith(".json"):
        try:
            return make_catalog(spec)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"unknown lattice {spec!r}") from exc
    doc = load_json(spec) if isinstance(spec, str) else spec
    return QuadLattice.from_json(doc)


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def load_period(arg: str) -> PeriodPoint:
    doc = load_json(arg)
    if isinstance(doc, dict) and isinstance(doc.get("result"), dict) and "period" in doc["result"]:
        doc = doc["result"]["period"]  # a `period random` response
    serialize.check_version(doc)
    return serialize.period_from_json(doc)


def load_line(arg: str):
    doc = load_json(arg)
    serialize.check_version(doc)
    lat = QuadLattice.from_json(doc["lattice"])
    f = NumberField.from_json(doc["field"]) if "field" in doc else QQ
    return line_through(lat, *(FVector.from_json(w, f) for w in doc["basis"]))


def line_doc(line) -> dict:
    f = line.space.field
    return {"v": serialize.VERSION, "kind": "line", "lattice": line.lattice.to_json(), "field": f.to_json(),
            **serialize.line_to_json(line, f)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_lattice_info(args):
    lat = load_lattice(args.lattice)
    p, n = lat.signature()
    return {"name": lat.name, "rank": lat.rank, "signature": [p, n],
            "determinant": lat.determinant, "even": lat.is_even}, None, {}


def cmd_lattice_kernel(args):
    lat = load_lattice(args.lattice)
    f = load_field(args.field)
    doc = load_json(args.constraints)
    vectors = [FVector.from_json(v, f) for v in doc]
    sub = integral_kernel(lat, vectors)
    return {"rank": sub.rank, "basis": sub.to_json()}, None, {}


def _period_summary(p: PeriodPoint, display: bool) -> dict:
    pic = picard_lattice(p)
    out = {"positive": True, "picard_rank": pic.rank, "generic": pic.rank == 0}
    if display:
        out["display"] = p.display()
    return out


def cmd_period_check(args):
    p = load_period(args.period)
    return _period_summary(p, args.display), None, {}


def cmd_period_random(args):
    import random

    lat = load_lattice(args.lattice)
    f = load_field(args.field)
    if args.generic:
        p, attempts = random_generic_period(lat, f, args.seed)
        diag = {"attempts": attempts}
    else:
        p = random_period(lat, f, random.Random(args.seed))
        diag = {}
    return {"period": serialize.period_to_json(p), **_period_summary(p, False)}, None, diag


def cmd_period_picard(args):
    p = load_period(args.period)
    pic = picard_lattice(p)
    return {"picard_rank": pic.rank, "basis": pic.to_json(), "gram": pic.gram()}, None, {}


def cmd_twistor_check(args):
    line = check_generic(load_line(args.line))
    return {"positive": True, "generic": line.is_generic}, line_doc(line), {}


def cmd_twistor_genericize(args):
    line = load_line(args.line)
    g = genericize(line, load_field(args.field), args.seed, args.budget)
    return {"generic": True, "magnitude": serialize.rat(g.magnitude)}, line_doc(g.line), {"attempts": g.attempts}


def cmd_connect(args):
    x = load_period(args.x)
    y = load_period(args.y)
    field = load_field(args.field) if args.field else None
    if args.radius is not None:
        center = load_period(args.ball_center) if args.ball_center else x
        ball = connectivity.Ball(center, Fraction(args.radius))
        res = connectivity.connect_strong_in_ball(x, y, ball, field or QQ, args.seed, args.budget)
        if isinstance(res, connectivity.NotNearEnough):
            raise _DomainFailure("NotNearEnough", res.reason)
        cert = res
    else:
        cert = connectivity.connect_global(
            x, y, field, seed=args.seed, max_subdivisions=args.max_subdivisions,
            strong=args.strong, budget=args.budget,
        )
    result = {"length": cert.length, "all_generic": all(ln.is_generic for ln in cert.lines)}
    route = cert.notes.get("route")
    if route:
        result["route"] = route
    return result, serialize.chain_to_json(cert), {}


def cmd_verify(args):
    doc = load_json(args.certificate)
    if isinstance(doc, dict) and "certificate" in doc and "ok" in doc:
        doc = doc["certificate"]  # a full CLI response
    rep = verify_chain(doc)
    failed = [c.name for c in rep.failures()]
    return {"verified": rep.ok, "checks": len(rep.checks), "failed": failed}, None, rep.to_json()


def cmd_weyl_reduce(args):
    lat = load_lattice(args.lattice)
    omega = int_list(args.omega)
    ref = FVector(int_list(args.ref)) if args.ref else FVector(omega)
    plane = None
    if args.roots:
        vecs = load_json(args.roots)
        roots = [weyl.Root(lat, v) for v in vecs]
    elif args.period:
        plane = load_period(args.period)
        lat = plane.lattice
        roots = weyl.roots_of_picard(plane, args.box)
    else:
        if args.box is None:
            raise UsageError("weyl reduce needs --roots, --period or --box")
        sub = Sublattice.full(lat)
        roots = [weyl.Root(lat, v) for v in enumerate_norm_vectors(sub, -2, args.box, method="box")]
    cone = PositiveConeRef(lat, plane, ref)
    red = weyl.chamber_reduce(omega, roots, cone, args.max_steps)
    return ({"omega": list(red.omega), "word_length": len(red.word), "roots_considered": len(roots)},
            {"v": serialize.VERSION, "kind": "reflection_word", **red.word.to_json()},
            {"violated_walls": list(red.violated_history)})


def cmd_isom_orientation(args):
    doc = load_json(args.matrix)
    lat = load_lattice(args.lattice) if args.lattice else QuadLattice.from_json(doc["lattice"])
    phi = LatticeIsometry(lat, doc["matrix"])
    return {"orientation_class": weyl.orientation_class(phi)}, None, {}


class _DomainFailure(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def options(suppress: bool) -> argparse.ArgumentParser:
        # subcommands accept the global options too, without overriding them with defaults
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        opts = argparse.ArgumentParser(add_help=False)
        opts.add_argument("--seed", type=int, default=dflt(0), help="seed for randomized commands")
        opts.add_argument("--format", choices=("json", "text"), default=dflt("json"))
        opts.add_argument("--out", default=dflt(None), help="write the response here (atomically)")
        return opts

    common = options(True)
    parser = argparse.ArgumentParser(prog="hktorelli", parents=[options(False)],
                                     description="Exact period-domain and twistor-line computations.")
    top = parser.add_subparsers(dest="group", required=True)

    lat = top.add_parser("lattice", help="lattice data").add_subparsers(dest="cmd", required=True)
    p = lat.add_parser("info", parents=[common])
    p.add_argument("lattice", help="catalog name (k3, hilb:3, kummer:4, u, e8neg, rank1:-2, ...) or JSON file")
    p.set_defaults(func=cmd_lattice_info)
    p = lat.add_parser("kernel", parents=[common])
    p.add_argument("--lattice", required=True)
    p.add_argument("--constraints", required=True, help="JSON list of vectors")
    p.add_argument("--field")
    p.set_defaults(func=cmd_lattice_kernel)

    per = top.add_parser("period", help="period points").add_subparsers(dest="cmd", required=True)
    p = per.add_parser("check", parents=[common])
    p.add_argument("period")
    p.add_argument("--display", action="store_true", help="include a float rendering")
    p.set_defaults(func=cmd_period_check)
    p = per.add_parser("random", parents=[common])
    p.add_argument("--lattice", required=True)
    p.add_argument("--field", default="qq")
    p.add_argument("--generic", action="store_true", help="retry until the Picard lattice is trivial")
    p.set_defaults(func=cmd_period_random)
    p = per.add_parser("picard", parents=[common])
    p.add_argument("period")
    p.set_defaults(func=cmd_period_picard)

    tw = top.add_parser("twistor", help="twistor lines").add_subparsers(dest="cmd", required=True)
    p = tw.add_parser("check", parents=[common])
    p.add_argument("line")
    p.set_defaults(func=cmd_twistor_check)
    p = tw.add_parser("genericize", parents=[common])
    p.add_argument("line")
    p.add_argument("--field", required=True)
    p.add_argument("--budget", type=int, default=50)
    p.set_defaults(func=cmd_twistor_genericize)

    p = top.add_parser("connect", parents=[common], help="chain of twistor lines between two periods")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--field")
    p.add_argument("--strong", action="store_true", help="require every line to be generic")
    p.add_argument("--radius", help="connect inside the ball of this radius (four generic lines)")
    p.add_argument("--ball-center", help="ball center period (default: x)")
    p.add_argument("--max-subdivisions", type=int, default=12)
    p.add_argument("--budget", type=int, default=50)
    p.set_defaults(func=cmd_connect)

    p = top.add_parser("verify", parents=[common], help="re-check a chain certificate")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    wy = top.add_parser("weyl", help="reflections").add_subparsers(dest="cmd", required=True)
    p = wy.add_parser("reduce", parents=[common])
    p.add_argument("--lattice", required=True)
    p.add_argument("--omega", required=True, help="comma-separated integers")
    p.add_argument("--ref", help="cone reference vector (default: omega)")
    p.add_argument("--roots", help="JSON list of (-2)-vectors")
    p.add_argument("--period", help="use the roots of this period's Picard lattice")
    p.add_argument("--box", type=int)
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_weyl_reduce)

    iso = top.add_parser("isom", help="isometries").add_subparsers(dest="cmd", required=True)
    p = iso.add_parser("orientation", parents=[common])
    p.add_argument("--matrix", required=True, help='JSON {"lattice": ..., "matrix": [[...]]}')
    p.add_argument("--lattice")
    p.set_defaults(func=cmd_isom_orientation)
    return parser


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _render(resp: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(resp, indent=2, sort_keys=True) + "\n"
    lines = [f"ok: {str(resp['ok']).lower()}"]
    for key, val in (resp.get("result") or {}).items():
        lines.append(f"{key}: {json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else val}")
    diag = resp.get("diagnostics") or {}
    if "error" in diag:
        lines.append(f"error: {diag['error']}: {diag.get('message', '')}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    status = 0
    try:
        result, cert, diag = args.func(args)
        ok = True
        if args.func is cmd_verify and not result["verified"]:
            ok, status = False, 1
        resp = {"v": serialize.VERSION, "ok": ok, "result": result, "certificate": cert, "diagnostics": diag}
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"hktorelli: error: {exc}\n")
        return 2
    except (TorelliError, _DomainFailure, KeyError, TypeError, ValueError) as exc:
        kind = exc.kind if isinstance(exc, _DomainFailure) else type(exc).__name__
        status = 1
        resp = {"v": serialize.VERSION, "ok": False, "result": None, "certificate": None,
                "diagnostics": {"error": kind, "message": str(exc)}}
        if isinstance(exc, EnumerationTooLarge):
            resp["diagnostics"]["hint"] = "pass --roots or --period, or lower --box"
    _emit(_render(resp, args.format), args.out)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
