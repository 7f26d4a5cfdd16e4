"""Independent re-checking of chain certificates.

The verifier works on the JSON document only.  Beyond parsing numbers and
field arithmetic it shares nothing with the construction code: Gram entries,
minors, span membership (Cramer's rule on Gram systems), orientation,
constraint rows and ball membership are all recomputed here.

Segment witnesses are affine paths s -> ((1-s) a0 + s a1, (1-s) b0 + s b1)
between consecutive chain points inside a positive three-space W.  The path
stays inside W because its endpoints do; it stays a plane because some
coordinate 2x2 minor of (a(s), b(s)) in a basis of W, a quadratic in s, is
shown to have no root on [0, 1].  The max-norm ball is convex, so endpoint
membership puts the whole path inside the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .scalar import FVector, NumberField, sign

SUPPORTED_VERSIONS = (1,)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


# ---------------------------------------------------------------------------
# arithmetic on parsed vectors
# ---------------------------------------------------------------------------


class _Form:
    def __init__(self, gram: Sequence[Sequence[int]]):
        self.gram = [list(map(int, r)) for r in gram]
        self.n = len(self.gram)

    def pair(self, u: Sequence, v: Sequence):
        total = 0
        for i, row in enumerate(self.gram):
            if u[i] == 0:
                continue
            s = 0
            for j, g in enumerate(row):
                if g and v[j] != 0:
                    s = s + g * v[j]
            if s != 0:
                total = total + u[i] * s
        return total


def _det(m: list[list]) -> Any:
    m = [list(r) for r in m]
    n = len(m)
    out = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out = out * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return out


def _coords(form: _Form, basis: list[list], v: list):
    """Coefficients of v in span(basis) via the Gram system, or None if v is outside."""
    k = len(basis)
    g = [[form.pair(basis[i], basis[j]) for j in range(k)] for i in range(k)]
    rhs = [form.pair(basis[i], v) for i in range(k)]
    d = _det(g)
    if d == 0:
        return None
    xs = []
    for col in range(k):
        mc = [row[:col] + [rhs[r]] + row[col + 1 :] for r, row in enumerate(g)]
        xs.append(_det(mc) / d)
    recon = [sum((xs[i] * basis[i][t] for i in range(k)), 0) for t in range(len(v))]
    if any(recon[t] != v[t] for t in range(len(v))):
        return None
    return xs


def _same_oriented_plane(form: _Form, p: tuple[list, list], q: tuple[list, list]) -> bool:
    ca = _coords(form, [p[0], p[1]], q[0])
    cb = _coords(form, [p[0], p[1]], q[1])
    if ca is None or cb is None:
        return False
    return sign(ca[0] * cb[1] - ca[1] * cb[0]) > 0


def _positive_plane(form: _Form, a: list, b: list) -> bool:
    qa, qb, qab = form.pair(a, a), form.pair(b, b), form.pair(a, b)
    return sign(qa) > 0 and sign(qa * qb - qab * qab) > 0


def _in_ball(v: list, c: list, r: Fraction, strict: bool) -> bool:
    for x, y in zip(v, c):
        lo, hi = sign(r + (x - y)), sign(r - (x - y))
        if (strict and (lo <= 0 or hi <= 0)) or (not strict and (lo < 0 or hi < 0)):
            return False
    return True


# ---------------------------------------------------------------------------
# constraint rows, rebuilt by the documented rule
# ---------------------------------------------------------------------------


def _rational_parts(x, d: int) -> list[Fraction]:
    if isinstance(x, (int, Fraction)):
        return [Fraction(x)] + [Fraction(0)] * (d - 1)
    cs = list(x.coeffs) + [Fraction(0)] * d
    return cs[:d]


def _rows_for(form: _Form, vectors: list[list], d: int) -> list[list[int]]:
    rows = []
    for w in vectors:
        parts = [_rational_parts(x, d) for x in w]
        for k in range(d):
            comp = [p[k] for p in parts]
            row = [sum((g * c for g, c in zip(grow, comp)), Fraction(0)) for grow in form.gram]
            if not any(row):
                continue
            den = 1
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
            ints = [int(x * den) for x in row]
            g = 0
            for x in ints:
                g = math.gcd(g, x)
            rows.append([x // g for x in ints])
    return rows


def _mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def _check_generic_witness(form: _Form, basis: list[list], d: int, w: dict) -> tuple[bool, str]:
    a = _rows_for(form, basis, d)
    m, n = len(a), form.n
    left, right, diag = w.get("left"), w.get("right"), w.get("diagonal")
    if not (isinstance(left, list) and isinstance(right, list) and isinstance(diag, list)):
        return False, "malformed witness"
    if len(left) != m or any(len(r) != m for r in left):
        return False, f"left matrix must be {m}x{m}"
    if len(right) != n or any(len(r) != n for r in right):
        return False, f"right matrix must be {n}x{n}"
    if m < n:
        return False, f"only {m} constraint rows for rank {n}"
    prod = _mul(_mul(left, a), right)
    for i in range(m):
        for j in range(n):
            want = diag[i] if i == j and i < len(diag) else 0
            if prod[i][j] != want:
                return False, "left * A * right is not the recorded diagonal"
    nonzero = sum(1 for i in range(min(len(diag), n)) if diag[i] != 0)
    if nonzero != n:
        return False, f"diagonal has {nonzero} nonzero entries, need {n}"
    return True, ""


def _check_nongeneric_witness(form: _Form, basis: list[list], w: dict) -> tuple[bool, str]:
    v = w.get("vector")
    if not isinstance(v, list) or len(v) != form.n or not all(isinstance(x, int) for x in v):
        return False, "malformed vector"
    if not any(v):
        return False, "witness vector is zero"
    if any(form.pair(v, b) != 0 for b in basis):
        return False, "witness vector is not orthogonal to W"
    return True, ""


# ---------------------------------------------------------------------------
# segments
# ---------------------------------------------------------------------------


def _nonzero_on(f: tuple, lo: Fraction, hi: Fraction) -> bool:
    """Quadratic alpha s^2 + beta s + gamma has no root on [lo, hi]."""
    al, be, ga = f

    def ev(s):
        return al * s * s + be * s + ga

    s0 = sign(ev(lo))
    if s0 == 0 or sign(ev(hi)) != s0:
        return False
    if sign(al) == 0:
        return True
    # vertex -beta / (2 alpha) in (lo, hi)?
    v = -be / (2 * al)
    if sign(v - lo) > 0 and sign(hi - v) > 0:
        return sign(ev(v)) == s0
    return True


def _segment_nondegenerate(ca0, ca1, cb0, cb1, depth: int = 8) -> bool:
    """a(s) and b(s) independent for every s in [0, 1]; coordinates in a basis of W."""
    da = [y - x for x, y in zip(ca0, ca1)]
    db = [y - x for x, y in zip(cb0, cb1)]
    quads = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        # (ca0 + s da)_i (cb0 + s db)_j - (ca0 + s da)_j (cb0 + s db)_i
        al = da[i] * db[j] - da[j] * db[i]
        be = ca0[i] * db[j] + da[i] * cb0[j] - ca0[j] * db[i] - da[j] * cb0[i]
        ga = ca0[i] * cb0[j] - ca0[j] * cb0[i]
        quads.append((al, be, ga))
    pending = [(Fraction(0), Fraction(1), depth)]
    while pending:
        lo, hi, dep = pending.pop()
        if any(_nonzero_on(q, lo, hi) for q in quads):
            continue
        if dep == 0:
            return False
        mid = (lo + hi) / 2
        pending += [(lo, mid, dep - 1), (mid, hi, dep - 1)]
    return True


# ---------------------------------------------------------------------------
# the verifier
# ---------------------------------------------------------------------------


def _vec(doc, field: NumberField, n: int) -> list:
    v = FVector.from_json(doc, field)
    if len(v) != n:
        raise ValueError(f"vector of length {len(v)}, expected {n}")
    return list(v.coords)


def _pair(doc, field, n) -> tuple[list, list]:
    return _vec(doc["a"], field, n), _vec(doc["b"], field, n)


def verify_chain(cert) -> VerifyReport:
    """Re-check a chain certificate (a ChainCertificate or its JSON document)."""
    if not isinstance(cert, dict):
        from .serialize import chain_to_json

        cert = chain_to_json(cert)
    rep = VerifyReport()
    if not rep.add("version", isinstance(cert, dict) and cert.get("v") in SUPPORTED_VERSIONS,
                   f"got {cert.get('v') if isinstance(cert, dict) else None!r}"):
        return rep
    try:
        gram = cert["lattice"]["gram"] if isinstance(cert["lattice"], dict) else None
        if gram is None:
            from .lattice import make_catalog

            gram = make_catalog(cert["lattice"]).gram
        form = _Form(gram)
        n = form.n
        fld = NumberField.from_json(cert["field"])
        d = fld.degree
        source = _pair(cert["source"], fld, n)
        target = _pair(cert["target"], fld, n)
        points = [_pair(p, fld, n) for p in cert["points"]]
        lines = cert["lines"]
        bases = [[_vec(w, fld, n) for w in ln["basis"]] for ln in lines]
        ball = cert.get("ball")
        center = _pair(ball["center"], fld, n) if ball else None
        radius = Fraction(ball["radius"]) if ball else None
        segs = [
            (s["line"], _pair(s["start"], fld, n), _pair(s["end"], fld, n))
            for s in cert.get("witnesses", [])
        ]
    except Exception as exc:  # malformed documents are report entries, not faults
        rep.add("parse", False, f"{type(exc).__name__}: {exc}")
        return rep
    rep.add("parse", True)
    rep.add("shape", len(points) == len(lines) + 1 and len(points) >= 1,
            f"{len(points)} points, {len(lines)} lines")
    rep.add("source", bool(points) and _same_oriented_plane(form, source, points[0]))
    rep.add("target", bool(points) and _same_oriented_plane(form, target, points[-1]))
    for i, (a, b) in enumerate(points):
        rep.add(f"point[{i}].positive", _positive_plane(form, a, b))

    for i, (ln, basis) in enumerate(zip(lines, bases)):
        if len(basis) != 3:
            rep.add(f"line[{i}].basis", False, "basis must have three vectors")
            continue
        g = [[form.pair(u, v) for v in basis] for u in basis]
        minors = [_det([r[:k] for r in g[:k]]) for k in (1, 2, 3)]
        rep.add(f"line[{i}].positive", all(sign(m) > 0 for m in minors))
        try:
            recorded = [FVector.from_json([m], fld).coords[0] for m in ln.get("minors", [])]
            rep.add(f"line[{i}].minors", recorded == minors, "recorded minors differ")
        except Exception as exc:
            rep.add(f"line[{i}].minors", False, str(exc))
        w = ln.get("witness")
        if w is None:
            rep.add(f"line[{i}].genericity", not ln.get("generic_required"), "generic witness missing")
        elif w.get("kind") == "generic":
            ok, why = _check_generic_witness(form, basis, d, w)
            rep.add(f"line[{i}].genericity", ok, why)
        elif w.get("kind") == "nongeneric":
            ok, why = _check_nongeneric_witness(form, basis, w)
            rep.add(f"line[{i}].nongeneric", ok, why)
            rep.add(f"line[{i}].genericity", not ln.get("generic_required"), "line flagged generic")
        else:
            rep.add(f"line[{i}].genericity", False, f"unknown witness kind {w.get('kind')!r}")
        if i + 1 < len(points):
            for j in (i, i + 1):
                a, b = points[j]
                inside = _coords(form, basis, a) is not None and _coords(form, basis, b) is not None
                rep.add(f"line[{i}].contains[{j}]", inside)

    if ball is not None:
        rep.add("ball.radius", radius > 0)
        for j, (a, b) in enumerate(points):
            strict = not (j == 0 and cert.get("boundary_start"))
            inside = _in_ball(a, center[0], radius, strict) and _in_ball(b, center[1], radius, strict)
            rep.add(f"point[{j}].in_ball", inside)
        if cert.get("boundary_start"):
            a, b = points[0]
            interior = _in_ball(a, center[0], radius, True) and _in_ball(b, center[1], radius, True)
            rep.add("point[0].on_boundary", not interior)
        rep.add("witnesses.count", len(segs) == len(lines), f"{len(segs)} segments for {len(lines)} lines")
        for k, (li, st, en) in enumerate(segs):
            tag = f"segment[{k}]"
            if not (isinstance(li, int) and 0 <= li < len(lines) and li + 1 < len(points)):
                rep.add(f"{tag}.index", False, f"line index {li!r}")
                continue
            rep.add(f"{tag}.start", _same_oriented_plane(form, points[li], st))
            rep.add(f"{tag}.end", _same_oriented_plane(form, points[li + 1], en))
            basis = bases[li]
            cs = [_coords(form, basis, v) for v in (st[0], en[0], st[1], en[1])]
            if any(c is None for c in cs):
                rep.add(f"{tag}.in_line", False)
                continue
            rep.add(f"{tag}.in_line", True)
            rep.add(f"{tag}.nondegenerate", _segment_nondegenerate(cs[0], cs[1], cs[2], cs[3]))
            strict0 = not (li == 0 and cert.get("boundary_start"))
            mid = ([(x + y) / 2 for x, y in zip(st[0], en[0])], [(x + y) / 2 for x, y in zip(st[1], en[1])])
            for name, (a, b), strict in (("start", st, strict0), ("end", en, True), ("mid", mid, True)):
                rep.add(f"{tag}.{name}_in_ball",
                        _in_ball(a, center[0], radius, strict) and _in_ball(b, center[1], radius, strict))
    return rep
