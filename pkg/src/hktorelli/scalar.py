"""Exact arithmetic in Q and in real number fields Q[t]/(p) with a chosen real root.

A :class:`NumberField` is a monic irreducible integer polynomial together with
a rational isolating interval for one of its real roots.  Elements are
:class:`AlgebraicScalar` residues in the power basis ``1, t, ..., t^(d-1)``;
their sign is the sign of the residue evaluated at the designated root and is
always decided exactly.

Degree-one fields are Q itself.  Vectors over Q hold plain
:class:`fractions.Fraction` coordinates, so rational computations pay nothing
for the field machinery.  Every routine that takes a scalar accepts either a
``Fraction``/``int`` or an ``AlgebraicScalar``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    BadIsolation,
    DimensionMismatch,
    FieldMismatch,
    IrreducibilityUnchecked,
    NotIrreducible,
    SchemaError,
)

Rational = Union[int, Fraction]

# ---------------------------------------------------------------------------
# dense univariate polynomials over Q, coefficient tuples low -> high, trimmed
# ---------------------------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def psub(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)
    )


def pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pdivmod(a, b):
    """Quotient and remainder of ``a`` by nonzero ``b`` over Q."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in a]
    lead = Fraction(b[-1])
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] / lead
        if c:
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] -= c * b[i]
    return _trim(q), _trim(r[:db])


def pgcd(a, b):
    """Monic gcd over Q."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return ()
    lead = Fraction(a[-1])
    return tuple(Fraction(x) / lead for x in a)


def pderiv(a):
    return _trim(i * a[i] for i in range(1, len(a)))


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(p):
    p = _trim(p)
    seq = [p, pderiv(p)]
    while seq[-1]:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(tuple(-c for c in r))
    return [s for s in seq if s]


def _variations(seq, x) -> int:
    signs = [_sgn(peval(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(p, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


# ---------------------------------------------------------------------------
# irreducibility over Q for the small fields we need
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _prime_factors(n: int) -> list[int]:
    n, out, f = abs(n), [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _integer_root(coeffs) -> int | None:
    if coeffs[0] == 0:
        return 0
    for d in _divisors(coeffs[0]):
        for r in (d, -d):
            if peval(coeffs, r) == 0:
                return r
    return None


def _eisenstein_prime(coeffs) -> int | None:
    if coeffs[0] == 0:
        return None
    for p in _prime_factors(coeffs[0]):
        if all(c % p == 0 for c in coeffs[:-1]) and coeffs[0] % (p * p) != 0:
            return p
    return None


def _quartic_quadratic_factor(coeffs) -> tuple | None:
    a0, a1, a2, a3, _ = coeffs
    for dv in _divisors(a0):
        for c in (dv, -dv):
            e = a0 // c
            if c != e:
                num = a1 - c * a3
                if num % (e - c):
                    continue
                b = num // (e - c)
                d = a3 - b
                if c + e + b * d == a2:
                    return (c, b, 1), (e, d, 1)
            else:
                if c * a3 != a1:
                    continue
                disc = a3 * a3 - 4 * (a2 - 2 * c)
                if disc < 0:
                    continue
                s = math.isqrt(disc)
                if s * s != disc or (a3 + s) % 2:
                    continue
                b, d = (a3 + s) // 2, (a3 - s) // 2
                return (c, b, 1), (e, d, 1)
    return None


def irreducibility_certificate(coeffs: Sequence[int]) -> str:
    """Return a short reason the monic integer polynomial is irreducible over Q.

    Accepted: degree 1; Eisenstein at some prime; degree 2 or 3 without integer
    roots; degree 4 without integer roots and without a splitting into monic
    integer quadratics.  Raises :class:`NotIrreducible` on a found factor and
    :class:`IrreducibilityUnchecked` for degree > 4 polynomials that are not
    Eisenstein.
    """
    coeffs = tuple(int(c) for c in coeffs)
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        raise NotIrreducible("minimal polynomial must be monic of degree >= 1")
    if deg == 1:
        return "linear"
    p = _eisenstein_prime(coeffs)
    if p is not None:
        return f"eisenstein:{p}"
    r = _integer_root(coeffs)
    if r is not None:
        raise NotIrreducible(f"t - ({r}) divides the polynomial")
    if deg <= 3:
        return "no-rational-root"
    if deg == 4:
        f = _quartic_quadratic_factor(coeffs)
        if f is not None:
            raise NotIrreducible(f"splits into quadratics {f}")
        return "quartic-factor-search"
    raise IrreducibilityUnchecked(
        f"degree {deg} polynomial is not Eisenstein; only degree <= 4 is factored"
    )


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------

_REFINE_WIDTH = Fraction(1, 2**48)


def _parse_rational(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise SchemaError("floats are not accepted as exact rationals")
    return Fraction(x)


def _rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class NumberField:
    """Q[t]/(p) embedded in R by sending t to the unique root of p in (lo, hi)."""

    __slots__ = ("min_poly", "root_lo", "root_hi", "name", "degree", "certificate",
                 "_lo", "_hi", "_power_table", "_bound")

    def __init__(self, min_poly: Sequence[int], root_lo, root_hi, name: str | None = None):
        poly = tuple(int(c) for c in min_poly)
        lo, hi = _parse_rational(root_lo), _parse_rational(root_hi)
        if lo >= hi:
            raise BadIsolation("isolation interval must satisfy lo < hi")
        self.certificate = irreducibility_certificate(poly)
        self.min_poly = poly
        self.root_lo, self.root_hi = lo, hi
        self.degree = len(poly) - 1
        self.name = name
        vlo, vhi = peval(poly, lo), peval(poly, hi)
        if vlo == 0 or vhi == 0 or _sgn(vlo) == _sgn(vhi):
            raise BadIsolation("polynomial must change sign strictly across the interval")
        if count_roots(poly, lo, hi) != 1:
            raise BadIsolation("interval must isolate exactly one real root")
        # Pre-refined copy used as the starting point of every sign query.
        slo = _sgn(vlo)
        while hi - lo > _REFINE_WIDTH:
            mid = (lo + hi) / 2
            vm = peval(poly, mid)
            if vm == 0:
                lo = hi = mid
                break
            if _sgn(vm) == slo:
                lo = mid
            else:
                hi = mid
        self._lo, self._hi = lo, hi
        d = self.degree
        # t^k mod p for k = d .. 2d-2, used by multiplication
        table = []
        cur = [Fraction(-c) for c in poly[:d]]
        for _ in range(max(d - 1, 0)):
            table.append(tuple(cur))
            lead = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if lead:
                for i in range(d):
                    cur[i] -= lead * poly[i]
        self._power_table = table
        self._bound = max(abs(self._lo), abs(self._hi))

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.min_poly != other.min_poly:
            return False
        if self.degree == 1:
            return True
        if self._hi < other._lo or other._hi < self._lo:
            return False
        lo, hi = min(self._lo, other._lo), max(self._hi, other._hi)
        return count_roots(self.min_poly, lo, hi) == 1

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<NumberField{label} {self.min_poly} root in ({self.root_lo}, {self.root_hi})>"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    # -- elements ---------------------------------------------------------
    def gen(self):
        if self.degree == 1:
            return Fraction(-self.min_poly[0])
        return AlgebraicScalar(self, (0, 1))

    def element(self, coeffs: Iterable):
        """Scalar from power-basis coefficients (reduced if longer than the degree)."""
        coeffs = [Fraction(c) for c in coeffs]
        if self.degree == 1:
            return Fraction(peval(coeffs, -self.min_poly[0])) if coeffs else Fraction(0)
        return AlgebraicScalar(self, coeffs)

    def coerce(self, x):
        if isinstance(x, AlgebraicScalar):
            if x.field is self:
                return x if self.degree > 1 else x.coeffs[0]
            if x.field.degree == 1 or not any(x.coeffs[1:]):
                return self.coerce(x.coeffs[0])
            if x.field == self:
                return AlgebraicScalar._raw(self, x.coeffs)
            raise FieldMismatch(f"cannot move an element of {x.field} into {self}")
        if isinstance(x, (int, Fraction)):
            if self.degree == 1:
                return Fraction(x)
            return AlgebraicScalar._raw(self, (Fraction(x),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise TypeError(f"not a scalar: {x!r}")

    def root_float(self) -> float:
        return float((self._lo + self._hi) / 2)

    def to_json(self) -> dict:
        return {
            "min_poly": list(self.min_poly),
            "root_lo": _rat_str(self.root_lo),
            "root_hi": _rat_str(self.root_hi),
        }

    @classmethod
    def from_json(cls, doc) -> "NumberField":
        try:
            return cls(doc["min_poly"], doc["root_lo"], doc["root_hi"], name=doc.get("name"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad field spec: {exc}") from exc


QQ = NumberField((0, 1), -1, 1, name="QQ")


def common_field(*fields: NumberField) -> NumberField:
    out = QQ
    for f in fields:
        if f.degree == 1:
            continue
        if out.degree == 1:
            out = f
        elif not (f is out or f == out):
            raise FieldMismatch(f"incompatible fields {out} and {f}")
    return out


def field_of(x) -> NumberField:
    return x.field if isinstance(x, AlgebraicScalar) else QQ


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class AlgebraicScalar:
    """Element of a real number field, stored as a reduced power-basis residue."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Iterable):
        c = [Fraction(x) for x in coeffs]
        d = field.degree
        if len(c) > d:
            c = list(pdivmod(tuple(c), field.min_poly)[1])
        c += [Fraction(0)] * (d - len(c))
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, field, coeffs):
        obj = object.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        return obj

    # -- coercion helpers -------------------------------------------------
    def _other(self, other):
        if isinstance(other, AlgebraicScalar):
            if other.field is self.field:
                return other.coeffs
            if other.field.degree == 1 or not any(other.coeffs[1:]):
                return (other.coeffs[0],) + (Fraction(0),) * (self.field.degree - 1)
            if other.field == self.field:
                return other.coeffs
            raise FieldMismatch(f"mixed fields {self.field} and {other.field}")
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar._raw(self.field, tuple(x + y for x, y in zip(self.coeffs, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar._raw(self.field, tuple(x - y for x, y in zip(self.coeffs, o)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar._raw(self.field, tuple(y - x for x, y in zip(self.coeffs, o)))

    def __neg__(self):
        return AlgebraicScalar._raw(self.field, tuple(-x for x in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicScalar._raw(self.field, tuple(x * other for x in self.coeffs))
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        a = self.coeffs
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(o):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        table = self.field._power_table
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                row = table[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return AlgebraicScalar._raw(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicScalar":
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: u*s + v*p = g
        p = tuple(Fraction(c) for c in self.field.min_poly)
        r0, r1 = p, _trim(self.coeffs)
        u0, u1 = (), (Fraction(1),)
        while len(r1) > 1:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            u0, u1 = u1, psub(u0, pmul(q, u1))
        if not r1:
            raise ZeroDivisionError("element is a zero divisor (polynomial not irreducible?)")
        c = r1[0]
        return AlgebraicScalar(self.field, [x / c for x in u1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return AlgebraicScalar._raw(self.field, tuple(x / other for x in self.coeffs))
        if isinstance(other, AlgebraicScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.coerce(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.coeffs == tuple(o)

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.min_poly, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    def __abs__(self):
        return -self if sign_at_root(self) < 0 else self

    def __float__(self):
        mid = (self.field._lo + self.field._hi) / 2
        return float(peval(self.coeffs, mid))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c})*t^{k}")
        return " + ".join(terms) if terms else "0"

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])


Scalar = Union[Fraction, AlgebraicScalar]


def _interval_eval(coeffs, lo, hi):
    """Enclosure of the polynomial over [lo, hi] by interval Horner."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        products = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(products) + c, max(products) + c
    return a, b


def sign_at_root(s) -> int:
    """Sign of ``s`` at the designated root of its field: -1, 0 or +1."""
    if not isinstance(s, AlgebraicScalar):
        return _sgn(s)
    c = s.coeffs
    if not any(c[1:]):
        return _sgn(c[0])
    field = s.field
    lo, hi = field._lo, field._hi
    poly = field.min_poly
    checked_zero = False
    slo = _sgn(peval(poly, lo))
    while True:
        e_lo, e_hi = _interval_eval(c, lo, hi)
        if e_lo > 0:
            return 1
        if e_hi < 0:
            return -1
        if not checked_zero:
            # Exact zero test: s vanishes at the root iff the root is a root of gcd(s, p).
            g = pgcd(_trim(c), poly)
            if len(g) > 1 and count_roots(g, field._lo, field._hi) > 0:
                return 0
            checked_zero = True
        mid = (lo + hi) / 2
        vm = peval(poly, mid)
        if vm == 0:
            return _sgn(peval(c, mid))
        if _sgn(vm) == slo:
            lo = mid
        else:
            hi = mid


def sign(s) -> int:
    return sign_at_root(s)


def compare(s1, s2) -> int:
    """-1, 0, +1 according to the real values at the designated root."""
    f1, f2 = field_of(s1), field_of(s2)
    if f1.degree > 1 and f2.degree > 1 and not (f1 is f2 or f1 == f2):
        raise FieldMismatch("comparison between elements of different fields")
    return sign_at_root(s1 - s2)


def abs_upper_bound(s) -> Fraction:
    """A rational number >= |s|, exact when s is rational."""
    if not isinstance(s, AlgebraicScalar) or s.is_rational:
        v = s.coeffs[0] if isinstance(s, AlgebraicScalar) else Fraction(s)
        return abs(v)
    lo, hi = _interval_eval(s.coeffs, s.field._lo, s.field._hi)
    return max(abs(lo), abs(hi))


def to_float(s) -> float:
    return float(s)


def scalar_to_json(s, field: NumberField) -> list[str]:
    s = field.coerce(s)
    if field.degree == 1:
        return [_rat_str(s)]
    return [_rat_str(c) for c in s.coeffs]


def scalar_from_json(doc, field: NumberField):
    if not isinstance(doc, list):
        doc = [doc]
    if len(doc) > field.degree:
        raise SchemaError("scalar has more coefficients than the field degree")
    return field.element(_parse_rational(x) for x in doc)


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


class FVector:
    """Coordinate vector over a number field (Fractions when the field is Q)."""

    __slots__ = ("field", "coords")

    def __init__(self, coords: Iterable, field: NumberField | None = None):
        coords = list(coords)
        if field is None:
            field = common_field(*(field_of(x) for x in coords))
        self.field = field
        self.coords = tuple(field.coerce(x) for x in coords)

    @classmethod
    def _raw(cls, field, coords):
        obj = object.__new__(cls)
        obj.field = field
        obj.coords = tuple(coords)
        return obj

    @classmethod
    def from_ints(cls, ints: Iterable[int], field: NumberField = QQ) -> "FVector":
        return cls(ints, field)

    @classmethod
    def from_components(cls, components: Sequence[Sequence], field: NumberField) -> "FVector":
        """Inverse of :meth:`components`: ``components[k][i]`` is the t^k part of coordinate i."""
        n = len(components[0])
        return cls([field.element(comp[i] for comp in components) for i in range(n)], field)

    def lift(self, field: NumberField) -> "FVector":
        if field is self.field:
            return self
        return FVector(self.coords, field)

    def _pair(self, other: "FVector"):
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch("vector lengths differ")
        if self.field is other.field:
            return self.field, self.coords, other.coords
        f = common_field(self.field, other.field)
        return f, self.lift(f).coords, other.lift(f).coords

    def __add__(self, other):
        f, a, b = self._pair(other)
        return FVector._raw(f, (x + y for x, y in zip(a, b)))

    def __sub__(self, other):
        f, a, b = self._pair(other)
        return FVector._raw(f, (x - y for x, y in zip(a, b)))

    def __neg__(self):
        return FVector._raw(self.field, (-x for x in self.coords))

    def scale(self, s) -> "FVector":
        f = common_field(self.field, field_of(s))
        s = f.coerce(s)
        v = self.lift(f)
        return FVector._raw(f, (s * x for x in v.coords))

    def __mul__(self, s):
        if isinstance(s, FVector):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, FVector):
            return NotImplemented
        if len(self) != len(other):
            return False
        try:
            _, a, b = self._pair(other)
        except FieldMismatch:
            return False
        return all(x == y for x, y in zip(a, b))

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"FVector({list(self.coords)!r})"

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_rational(self) -> bool:
        return self.field.degree == 1 or all(x.is_rational for x in self.coords)

    def components(self) -> list[tuple[Fraction, ...]]:
        """Power-basis expansion: ``d`` rational vectors with v = sum_k t^k * comp[k]."""
        d = self.field.degree
        if d == 1:
            return [tuple(Fraction(x) for x in self.coords)]
        return [tuple(x.coeffs[k] for x in self.coords) for k in range(d)]

    def max_abs_upper_bound(self) -> Fraction:
        return max((abs_upper_bound(x) for x in self.coords), default=Fraction(0))

    def to_float(self) -> list[float]:
        return [float(x) for x in self.coords]

    def to_json(self) -> list:
        return [scalar_to_json(x, self.field) for x in self.coords]

    @classmethod
    def from_json(cls, doc, field: NumberField) -> "FVector":
        return cls((scalar_from_json(x, field) for x in doc), field)


def as_fvector(v, field: NumberField | None = None) -> FVector:
    if isinstance(v, FVector):
        return v if field is None else v.lift(common_field(v.field, field))
    return FVector(v, field)


def unify(vectors: Sequence[FVector]) -> tuple[NumberField, list[FVector]]:
    f = common_field(*(v.field for v in vectors))
    return f, [v.lift(f) for v in vectors]


# ---------------------------------------------------------------------------
# exact linear algebra over a field
# ---------------------------------------------------------------------------


def _row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (copies); returns rows and pivot columns."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col] if not isinstance(m[r][col], AlgebraicScalar) else m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _coerced_rows(vectors: Sequence[FVector]):
    f, vs = unify(list(vectors))
    one = f.coerce(1)
    return f, [[one * x if f.degree == 1 else x for x in v.coords] for v in vs]


def rank(vectors: Sequence[FVector]) -> int:
    if not vectors:
        return 0
    _, rows = _coerced_rows(vectors)
    return len(_row_reduce(rows)[1])


def solve_in_span(basis: Sequence[FVector], v: FVector):
    """Coefficients x with sum x_i basis_i = v, or None if v is not in the span.

    The basis is assumed linearly independent.
    """
    f, vs = unify(list(basis) + [v])
    k = len(basis)
    n = len(v)
    # columns = basis vectors, augmented with v
    rows = [[vs[j].coords[i] for j in range(k)] + [vs[k].coords[i]] for i in range(n)]
    red, pivots = _row_reduce(rows)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise DimensionMismatch("basis is linearly dependent")
    return [red[i][k] for i in range(k)]


def det(matrix: Sequence[Sequence]):
    """Determinant by fraction-free-ish Gaussian elimination over the field."""
    m = [list(r) for r in matrix]
    n = len(m)
    result = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result = result * p
        inv = p.inverse() if isinstance(p, AlgebraicScalar) else 1 / Fraction(p)
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return result


def leading_minors(matrix: Sequence[Sequence]) -> list:
    return [det([row[:k] for row in matrix[:k]]) for k in range(1, len(matrix) + 1)]


# ---------------------------------------------------------------------------
# prebuilt fields
# ---------------------------------------------------------------------------


def _squarefree(k: int) -> bool:
    return all(k % (p * p) for p in _prime_factors(k))


def quadratic_field(k: int) -> NumberField:
    """Q(sqrt k) for squarefree k >= 2, with the positive square root."""
    if k < 2 or not _squarefree(k):
        raise NotIrreducible(f"t^2 - {k} needs squarefree k >= 2")
    r = math.isqrt(k)
    return NumberField((-k, 0, 1), r, r + 1, name=f"sqrt:{k}")


def radical_field(n: int, m: int = 2) -> NumberField:
    """Q(m^(1/n)) with the positive real root, m >= 2."""
    if n < 1 or m < 2:
        raise NotIrreducible("radical field needs n >= 1 and m >= 2")
    if n == 1:
        return QQ
    return NumberField((-m,) + (0,) * (n - 1) + (1,), 1, m, name=f"rad:{n}:{m}")


_CYCLOTOMIC_REAL = {
    5: ((-1, 1, 1), 0, 1),
    7: ((-1, -2, 1, 1), 1, Fraction(3, 2)),
    9: ((1, -3, 0, 1), Fraction(3, 2), 2),
}


def cyclotomic_real_field(n: int) -> NumberField:
    """Q(2 cos(2 pi / n)) for n in {5, 7, 9}."""
    try:
        poly, lo, hi = _CYCLOTOMIC_REAL[n]
    except KeyError:
        raise NotIrreducible(f"no prebuilt real cyclotomic field for n = {n}") from None
    return NumberField(poly, lo, hi, name=f"cyc:{n}")


def field_by_name(name: str) -> NumberField:
    """Resolve ``qq``, ``sqrt:k``/``sqrtk``, ``rad:n[:m]`` or ``cyc:n``."""
    key = name.strip().lower()
    if key in ("qq", "q", "rational", "rad:1"):
        return QQ
    if key.startswith("sqrt"):
        return quadratic_field(int(key[4:].lstrip(":")))
    if key.startswith("rad:"):
        parts = key.split(":")[1:]
        return radical_field(int(parts[0]), int(parts[1]) if len(parts) > 1 else 2)
    if key.startswith("cyc:"):
        return cyclotomic_real_field(int(key[4:]))
    raise KeyError(f"unknown field name {name!r}")
