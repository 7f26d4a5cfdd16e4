"""Versioned JSON documents for lattices, periods, lines and chain certificates.

Every document carries ``"v": 1``.  Rationals are "p/q" strings and field
elements are lists of power-basis coefficients; a certificate stores one
field for all of its vectors.
"""

from __future__ import annotations

from fractions import Fraction

from .connectivity import Ball, ChainCertificate
from .errors import SchemaError
from .lattice import QuadLattice
from .period import PeriodPoint, make_period
from .scalar import FVector, NumberField, common_field, scalar_to_json
from .twistor import GenericWitness, NonGenericWitness, TwistorLine

VERSION = 1


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def check_version(doc) -> None:
    if not isinstance(doc, dict) or doc.get("v") != VERSION:
        raise SchemaError(f"unsupported document version {doc.get('v') if isinstance(doc, dict) else None!r}")


def pair_to_json(a: FVector, b: FVector, field: NumberField) -> dict:
    return {"a": a.lift(field).to_json(), "b": b.lift(field).to_json()}


def witness_to_json(w) -> dict | None:
    if isinstance(w, GenericWitness):
        return {
            "kind": "generic",
            "left": [list(r) for r in w.left],
            "right": [list(r) for r in w.right],
            "diagonal": list(w.diagonal),
        }
    if isinstance(w, NonGenericWitness):
        return {"kind": "nongeneric", "vector": list(w.vector)}
    return None


def line_to_json(line: TwistorLine, field: NumberField | None = None) -> dict:
    f = field or line.space.field
    return {
        "basis": [w.lift(f).to_json() for w in line.basis],
        "minors": [scalar_to_json(m, f) for m in line.space.minors],
        "witness": witness_to_json(line.genericity),
    }


def period_to_json(p: PeriodPoint) -> dict:
    return {"v": VERSION, **p.to_json()}


def period_from_json(doc, lattice: QuadLattice | None = None) -> PeriodPoint:
    return PeriodPoint.from_json(doc, lattice)


def chain_to_json(cert: ChainCertificate) -> dict:
    vectors_fields = [p.field for p in cert.points] + [cert.source.field, cert.target.field]
    vectors_fields += [ln.space.field for ln in cert.lines]
    if cert.ball is not None:
        vectors_fields.append(cert.ball.center.field)
    f = common_field(*vectors_fields)
    doc = {
        "v": VERSION,
        "kind": "chain",
        "lattice": cert.lattice.to_json(),
        "field": f.to_json(),
        "source": pair_to_json(cert.source.a, cert.source.b, f),
        "target": pair_to_json(cert.target.a, cert.target.b, f),
        "points": [pair_to_json(p.a, p.b, f) for p in cert.points],
        "lines": [
            {**line_to_json(ln, f), "generic_required": req}
            for ln, req in zip(cert.lines, cert.generic_required)
        ],
        "ball": None,
        "witnesses": [
            {
                "line": s.line_index,
                "start": pair_to_json(*s.start, f),
                "end": pair_to_json(*s.end, f),
            }
            for s in cert.segments
        ],
        "boundary_start": cert.boundary_start,
    }
    if cert.ball is not None:
        c = cert.ball.center
        doc["ball"] = {"center": pair_to_json(c.a, c.b, f), "radius": rat(cert.ball.radius)}
    return doc


def ball_from_json(doc, lattice: QuadLattice, field: NumberField) -> Ball:
    c = doc["center"]
    center = make_period(lattice, FVector.from_json(c["a"], field), FVector.from_json(c["b"], field))
    return Ball(center, Fraction(doc["radius"]))
