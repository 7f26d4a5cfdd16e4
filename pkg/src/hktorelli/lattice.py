"""Integral quadratic lattices, the hyperkaehler lattice catalog, kernels, isometries.

A lattice is a symmetric nondegenerate integer Gram matrix ``G``; the form is
``q(v, w) = v^T G w``.  Isometries act on column vectors, ``v -> M v``.

Catalog layout (fixed, relied upon by tests and serialized data):

* ``U`` is ``[[0, 1], [1, 0]]``.
* ``E8neg`` is minus the E8 Cartan matrix in Bourbaki numbering, simple roots
  1..8 with bonds 1-3, 3-4, 4-5, 5-6, 6-7, 7-8 and 2-4.
* ``K3`` is ``U + U + U + E8neg + E8neg`` in that coordinate order
  (coordinates 0..5 are the three hyperbolic planes).
* ``HilbK3(n)`` is ``K3 + <-2(n-1)>`` and ``Kummer(n)`` is ``3U + <-2n>``; the
  torus lattice H^2(T, Z) is realized as ``3U``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import intlinalg
from .errors import DegenerateLattice, DimensionMismatch, EnumerationTooLarge, NotAnIsometry
from .scalar import FVector, common_field, field_of

IntVector = tuple[int, ...]

E8_BONDS = ((0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3))


def _diagonalize(gram: Sequence[Sequence[int]]) -> list[tuple[list[Fraction], Fraction]]:
    """Rational congruence diagonalization.

    Returns pairs ``(v, q(v))`` with the ``v`` pairwise q-orthogonal and spanning
    Q^n.  Raises :class:`DegenerateLattice` if the form is degenerate.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    active = list(range(n))
    out = []
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                raise DegenerateLattice("form is degenerate")
            i, j = pair
            # e_i <- e_i + e_j gives q(e_i) = 2 q(e_i, e_j) != 0
            basis[i] = [x + y for x, y in zip(basis[i], basis[j])]
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        active.remove(piv)
        for j in active:
            f = a[j][piv] / p
            if f:
                basis[j] = [x - f * y for x, y in zip(basis[j], basis[piv])]
                for k in range(n):
                    a[j][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][j] -= f * a[k][piv]
        out.append((basis[piv], p))
    return out


def _primitive(v: Iterable[Fraction]) -> IntVector:
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


@dataclass(frozen=True)
class QuadLattice:
    gram: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)
    frame_hint: tuple[IntVector, ...] | None = field(default=None, compare=False, repr=False)
    _signature: tuple[int, int] = field(init=False, compare=False, repr=False)
    _rows: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if n == 0 or any(len(r) != n for r in g):
            raise DimensionMismatch("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise DegenerateLattice("Gram matrix is not symmetric")
        if intlinalg.det(g) == 0:
            raise DegenerateLattice("Gram matrix is singular")
        object.__setattr__(self, "gram", g)
        diag = _diagonalize(g)
        p = sum(1 for _, d in diag if d > 0)
        object.__setattr__(self, "_signature", (p, n - p))
        object.__setattr__(
            self, "_rows", tuple(tuple((j, x) for j, x in enumerate(row) if x) for row in g)
        )

    @property
    def rank(self) -> int:
        return len(self.gram)

    def signature(self) -> tuple[int, int]:
        return self._signature

    @property
    def determinant(self) -> int:
        return intlinalg.det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    # -- the form -----------------------------------------------------------
    def pair(self, v, w):
        """q(v, w) for integer sequences or FVectors (mixed allowed)."""
        vc = v.coords if isinstance(v, FVector) else v
        wc = w.coords if isinstance(w, FVector) else w
        if len(vc) != self.rank or len(wc) != self.rank:
            raise DimensionMismatch(f"expected vectors of length {self.rank}")
        total = 0
        for vi, row in zip(vc, self._rows):
            if vi == 0:
                continue
            s = 0
            for j, g in row:
                wj = wc[j]
                if wj != 0:
                    s = s + wj * g
            if s != 0:
                total = total + vi * s
        return total

    def norm(self, v):
        return self.pair(v, v)

    def gram_of(self, vectors: Sequence) -> list[list]:
        k = len(vectors)
        out = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                out[i][j] = out[j][i] = self.pair(vectors[i], vectors[j])
        return out

    def apply_gram(self, v) -> list:
        """G v as a list (coordinates of the linear form q(., v))."""
        vc = v.coords if isinstance(v, FVector) else v
        out = []
        for row in self._rows:
            s = 0
            for j, g in row:
                if vc[j] != 0:
                    s = s + vc[j] * g
            out.append(s)
        return out

    # -- positive directions ------------------------------------------------
    def positive_frame(self) -> tuple[IntVector, ...]:
        """Pairwise orthogonal integer vectors spanning a maximal positive subspace.

        Catalog lattices use their stored choice (the diagonals ``e + f`` of the
        hyperbolic planes); other lattices use rational diagonalization.
        """
        if self.frame_hint is not None:
            return self.frame_hint
        return tuple(_primitive(v) for v, d in _diagonalize(self.gram) if d > 0)

    def to_json(self) -> dict:
        doc = {"rank": self.rank, "gram": [list(r) for r in self.gram]}
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_json(cls, doc) -> "QuadLattice":
        if isinstance(doc, str):
            return make_catalog(doc)
        gram = doc["gram"]
        if "rank" in doc and doc["rank"] != len(gram):
            raise DimensionMismatch("rank field disagrees with the Gram matrix")
        if doc.get("name"):
            try:
                cat = make_catalog(doc["name"])
            except (KeyError, ValueError):
                cat = None
            if cat is not None and cat.gram == tuple(tuple(r) for r in gram):
                return cat
        return cls(tuple(tuple(r) for r in gram), name=doc.get("name"))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def hyperbolic_plane() -> QuadLattice:
    return QuadLattice(((0, 1), (1, 0)), name="u", frame_hint=((1, 1),))


def e8_negative() -> QuadLattice:
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = -2
    for i, j in E8_BONDS:
        g[i][j] = g[j][i] = 1
    return QuadLattice(tuple(map(tuple, g)), name="e8neg")


def rank_one(k: int) -> QuadLattice:
    if k == 0:
        raise ValueError("rank-one lattice needs k != 0")
    return QuadLattice(((k,),), name=f"rank1:{k}")


def diagonal(*entries: int) -> QuadLattice:
    n = len(entries)
    g = tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))
    return QuadLattice(g, name="diag:" + ",".join(str(e) for e in entries))


def direct_sum(*parts: QuadLattice, name: str | None = None) -> QuadLattice:
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    hints = []
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        if p.frame_hint is not None or p.signature()[0] > 0:
            for v in p.positive_frame():
                hints.append(tuple([0] * off + list(v) + [0] * (n - off - p.rank)))
        off += p.rank
    return QuadLattice(tuple(map(tuple, g)), name=name, frame_hint=tuple(hints))


def hyperbolic_sum(k: int) -> QuadLattice:
    return direct_sum(*([hyperbolic_plane()] * k), name=f"u^{k}")


def k3_lattice() -> QuadLattice:
    u = hyperbolic_plane()
    e8 = e8_negative()
    return direct_sum(u, u, u, e8, e8, name="k3")


def hilb_k3(n: int) -> QuadLattice:
    if n < 2:
        raise ValueError("HilbK3(n) needs n >= 2")
    return direct_sum(k3_lattice(), rank_one(-2 * (n - 1)), name=f"hilb:{n}")


def kummer(n: int) -> QuadLattice:
    if n < 3:
        raise ValueError("Kummer(n) needs n >= 3")
    return direct_sum(hyperbolic_sum(3), rank_one(-2 * n), name=f"kummer:{n}")


def make_catalog(kind: str) -> QuadLattice:
    """Lattice by name: ``k3``, ``hilb:n``, ``kummer:n``, ``u``, ``u^k``, ``e8neg``,
    ``rank1:k`` or ``diag:a,b,...``."""
    key = kind.strip().lower()
    if key == "k3":
        return k3_lattice()
    if key == "u":
        return hyperbolic_plane()
    if key == "e8neg":
        return e8_negative()
    head, _, arg = key.partition(":")
    if head == "hilb" and arg:
        return hilb_k3(int(arg))
    if head == "kummer" and arg:
        return kummer(int(arg))
    if head == "rank1" and arg:
        return rank_one(int(arg))
    if head == "diag" and arg:
        return diagonal(*(int(x) for x in arg.split(",")))
    if key.startswith("u^"):
        return hyperbolic_sum(int(key[2:]))
    if key in ("3u", "2u"):
        return hyperbolic_sum(int(key[0]))
    raise KeyError(f"unknown lattice kind {kind!r}")


def signature(lattice: QuadLattice) -> tuple[int, int]:
    return lattice.signature()


def signature_of_gram(gram: Sequence[Sequence[int]]) -> tuple[int, int]:
    diag = _diagonalize(gram)
    p = sum(1 for _, d in diag if d > 0)
    return p, len(gram) - p


# ---------------------------------------------------------------------------
# sublattices and kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sublattice:
    ambient: QuadLattice
    basis: tuple[IntVector, ...]

    @classmethod
    def from_generators(cls, ambient: QuadLattice, vectors: Iterable[Sequence[int]]) -> "Sublattice":
        rows = [list(map(int, v)) for v in vectors]
        for r in rows:
            if len(r) != ambient.rank:
                raise DimensionMismatch("generator length differs from the lattice rank")
        return cls(ambient, tuple(tuple(r) for r in intlinalg.hnf(rows)))

    @classmethod
    def full(cls, ambient: QuadLattice) -> "Sublattice":
        return cls(ambient, tuple(map(tuple, intlinalg.identity(ambient.rank))))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> list[list[int]]:
        return self.ambient.gram_of(self.basis)

    def combine(self, coeffs: Sequence[int]) -> IntVector:
        n = self.ambient.rank
        out = [0] * n
        for c, b in zip(coeffs, self.basis):
            if c:
                for i in range(n):
                    out[i] += c * b[i]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        v = list(map(int, v))
        for row in self.basis:
            col = next(j for j, x in enumerate(row) if x)
            if v[col] % row[col]:
                return False
            q = v[col] // row[col]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


def constraint_rows(lattice: QuadLattice, constraints: Sequence) -> list[list[int]]:
    """Integer rows whose common kernel is {alpha : q(alpha, w) = 0 for all w}.

    Each constraint w over a degree-d field contributes the d rows ``G w_k``
    (w = sum_k t^k w_k), denominators cleared and content removed; zero rows
    are dropped.
    """
    rows = []
    for w in constraints:
        w = w if isinstance(w, FVector) else FVector(w)
        if len(w) != lattice.rank:
            raise DimensionMismatch("constraint length differs from the lattice rank")
        for comp in w.components():
            row = lattice.apply_gram(comp)
            if any(row):
                rows.append(list(_primitive(row)))
    return rows


def integral_kernel(lattice: QuadLattice, constraints: Sequence) -> Sublattice:
    """{alpha in L : q(alpha, w_i) = 0 for every constraint w_i}, in HNF."""
    fields = [c.field for c in constraints if isinstance(c, FVector)]
    common_field(*fields)
    rows = constraint_rows(lattice, constraints)
    basis = intlinalg.integer_kernel(rows, lattice.rank)
    return Sublattice(lattice, tuple(tuple(r) for r in basis))


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsometryCheck:
    ok: bool
    residual: tuple[tuple[int, ...], ...]
    determinant: int

    def __bool__(self):
        return self.ok


def is_isometry(lattice: QuadLattice, matrix: Sequence[Sequence[int]]) -> IsometryCheck:
    """M^T G M == G and |det M| == 1; the residual M^T G M - G is the certificate."""
    n = lattice.rank
    m = [list(map(int, r)) for r in matrix]
    if len(m) != n or any(len(r) != n for r in m):
        return IsometryCheck(False, (), 0)
    mtgm = intlinalg.matmul(intlinalg.transpose(m), intlinalg.matmul(lattice.gram, m))
    residual = tuple(tuple(mtgm[i][j] - lattice.gram[i][j] for j in range(n)) for i in range(n))
    d = intlinalg.det(m)
    ok = not any(any(r) for r in residual) and abs(d) == 1
    return IsometryCheck(ok, residual, d)


@dataclass(frozen=True)
class LatticeIsometry:
    lattice: QuadLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if not is_isometry(self.lattice, m):
            raise NotAnIsometry("matrix does not preserve the form or is not unimodular")

    @classmethod
    def identity(cls, lattice: QuadLattice) -> "LatticeIsometry":
        return cls(lattice, tuple(map(tuple, intlinalg.identity(lattice.rank))))

    @classmethod
    def minus_identity(cls, lattice: QuadLattice) -> "LatticeIsometry":
        n = lattice.rank
        return cls(lattice, tuple(tuple(-int(i == j) for j in range(n)) for i in range(n)))

    def apply(self, v):
        if isinstance(v, FVector):
            f = v.field
            return FVector._raw(
                f,
                (sum((m * x for m, x in zip(row, v.coords) if m), f.coerce(0)) for row in self.matrix),
            )
        return tuple(sum(m * int(x) for m, x in zip(row, v)) for row in self.matrix)

    def compose(self, other: "LatticeIsometry") -> "LatticeIsometry":
        """self after other."""
        if self.lattice != other.lattice:
            raise DimensionMismatch("isometries of different lattices")
        return LatticeIsometry(self.lattice, tuple(map(tuple, intlinalg.matmul(self.matrix, other.matrix))))

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "LatticeIsometry":
        # M^{-1} = G^{-1} M^T G; computed exactly and checked by the constructor
        g = self.lattice.gram
        n = len(g)
        mtg = intlinalg.matmul(intlinalg.transpose(self.matrix), g)
        ginv = _rational_inverse(g)
        inv = [[sum(ginv[i][k] * mtg[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return LatticeIsometry(self.lattice, tuple(tuple(int(x) for x in r) for r in inv))

    def to_json(self) -> dict:
        return {"lattice": self.lattice.to_json(), "matrix": [list(r) for r in self.matrix]}


def _rational_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# enumeration of vectors of a given norm
# ---------------------------------------------------------------------------


def _sign_canonical(v: Sequence[int]) -> IntVector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _ldl(m: Sequence[Sequence[int]]):
    """q(c) = sum_i d_i (c_i + sum_{j>i} mu_ij c_j)^2 for positive definite m."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    d, mu = [], []
    for i in range(n):
        p = a[i][i]
        d.append(p)
        mu.append({j: a[i][j] / p for j in range(i + 1, n) if a[i][j]})
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] -= a[j][i] * a[i][k] / p
    return d, mu


def _fincke_pohst(m: Sequence[Sequence[int]], target: int) -> list[IntVector]:
    """All c with c^T m c == target for positive definite m (target > 0)."""
    n = len(m)
    d, mu = _ldl(m)
    out = []
    c = [0] * n

    def rec(i: int, remaining: Fraction):
        center = -sum((mu[i][j] * c[j] for j in mu[i]), Fraction(0))
        t = remaining / d[i]
        sr = math.isqrt(t.numerator * t.denominator) // t.denominator
        lo = math.floor(center) - sr - 1
        hi = math.ceil(center) + sr + 1
        for x in range(lo, hi + 1):
            dev = (x - center) ** 2
            if dev > t:
                continue
            rest = remaining - d[i] * dev
            c[i] = x
            if i == 0:
                if rest == 0:
                    out.append(tuple(c))
            else:
                rec(i - 1, rest)
        c[i] = 0

    rec(n - 1, Fraction(target))
    return out


MAX_BOX_CANDIDATES = 5_000_000


def enumerate_norm_vectors(
    sub: Sublattice,
    target_norm: int,
    box_bound: int | None,
    method: str = "auto",
    max_candidates: int = MAX_BOX_CANDIDATES,
) -> list[IntVector]:
    """Vectors of norm ``target_norm`` in ``sub``, one per +/- pair.

    Results are ambient-coordinate integer vectors, each with its first
    nonzero coordinate positive, sorted lexicographically.  With
    ``box_bound`` set, only vectors whose coordinates in the sublattice basis
    are bounded by it in absolute value are returned, and the result is
    complete for that box (nothing outside the box is claimed).

    ``method``: ``"box"`` scans the box; ``"definite"`` uses exact
    Fincke-Pohst on a definite sublattice (complete for the norm, box applied
    as a filter when given); ``"auto"`` picks ``definite`` when the
    sublattice is definite and plain box scanning otherwise.
    """
    r = sub.rank
    if r == 0 or target_norm == 0:
        return []
    m = sub.gram()
    p, n = signature_of_gram(m)
    definite = p == r or n == r
    if method == "auto":
        method = "definite" if definite else "box"
    found: set[IntVector] = set()
    if method == "definite":
        if not definite:
            raise ValueError("definite enumeration needs a definite sublattice")
        sgn = 1 if p == r else -1
        if target_norm * sgn < 0:
            return []
        mm = [[sgn * x for x in row] for row in m]
        for c in _fincke_pohst(mm, sgn * target_norm):
            if box_bound is not None and max(abs(x) for x in c) > box_bound:
                continue
            found.add(_sign_canonical(sub.combine(c)))
    elif method == "box":
        if box_bound is None or box_bound < 1:
            raise ValueError("box enumeration needs box_bound >= 1")
        if (2 * box_bound + 1) ** r > max_candidates:
            raise EnumerationTooLarge(
                f"box of radius {box_bound} in rank {r} exceeds {max_candidates} candidates"
            )
        rng = range(-box_bound, box_bound + 1)
        for c in itertools.product(rng, repeat=r):
            first = next((x for x in c if x), 0)
            if first <= 0:
                continue
            val = 0
            for i in range(r):
                if c[i]:
                    row = m[i]
                    val += c[i] * sum(row[j] * c[j] for j in range(r) if c[j])
            if val == target_norm:
                found.add(_sign_canonical(sub.combine(c)))
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    return sorted(found)
