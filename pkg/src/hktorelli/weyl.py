"""(-2)-reflections, root enumeration in Picard lattices, chamber reduction and
the orientation character of isometries.

Chamber reduction is relative to the root set it is given.  Roots found by a
box search need not be all roots, so a reduced vector is only known to lie on
the nonnegative side of the supplied walls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import intlinalg
from .errors import NoPositiveThreeSpace, NotARoot, NotInCone, NotOrthogonal, StepBudgetExhausted
from .lattice import IntVector, LatticeIsometry, QuadLattice, _sign_canonical, enumerate_norm_vectors
from .period import PeriodPoint, PositiveConeRef, in_positive_cone, picard_lattice
from .scalar import det, sign


@dataclass(frozen=True)
class Root:
    lattice: QuadLattice
    vector: IntVector

    def __post_init__(self):
        v = tuple(int(x) for x in self.vector)
        if len(v) != self.lattice.rank:
            raise NotARoot("root has the wrong length")
        if self.lattice.norm(v) != -2:
            raise NotARoot(f"q(delta) = {self.lattice.norm(v)}, expected -2")
        object.__setattr__(self, "vector", _sign_canonical(v))

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """I + delta (G delta)^T, so that M v = v + q(v, delta) delta."""
        d = self.vector
        gd = self.lattice.apply_gram(d)
        n = len(d)
        return tuple(tuple(int(i == j) + d[i] * gd[j] for j in range(n)) for i in range(n))

    def isometry(self) -> LatticeIsometry:
        return LatticeIsometry(self.lattice, self.matrix())


def as_root(lattice: QuadLattice, delta) -> Root:
    return delta if isinstance(delta, Root) else Root(lattice, tuple(delta))


def reflect(delta: Root, v: Sequence[int]) -> IntVector:
    """s_delta(v) = v + q(v, delta) delta."""
    lat = delta.lattice
    if len(v) != lat.rank:
        raise NotARoot("vector and root have different lengths")
    c = lat.pair(v, delta.vector)
    return tuple(int(x) + c * y for x, y in zip(v, delta.vector))


@dataclass(frozen=True)
class ReflectionWord:
    """Roots applied left to right; ``matrix`` is M_k ... M_1."""

    lattice: QuadLattice
    roots: tuple[Root, ...]
    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def empty(cls, lattice: QuadLattice) -> "ReflectionWord":
        return cls(lattice, (), tuple(map(tuple, intlinalg.identity(lattice.rank))))

    @classmethod
    def of(cls, lattice: QuadLattice, roots: Iterable[Root]) -> "ReflectionWord":
        w = cls.empty(lattice)
        for r in roots:
            w = w.then(r)
        return w

    def then(self, r: Root) -> "ReflectionWord":
        m = intlinalg.matmul(r.matrix(), self.matrix)
        return ReflectionWord(self.lattice, self.roots + (r,), tuple(map(tuple, m)))

    def __len__(self) -> int:
        return len(self.roots)

    def apply(self, v: Sequence[int]) -> IntVector:
        return tuple(sum(m * int(x) for m, x in zip(row, v)) for row in self.matrix)

    def isometry(self) -> LatticeIsometry:
        return LatticeIsometry(self.lattice, self.matrix)

    def to_json(self) -> dict:
        return {"roots": [list(r.vector) for r in self.roots], "matrix": [list(r) for r in self.matrix]}


def orient_roots(roots: Iterable[Root], ref: Sequence) -> list[IntVector]:
    """Each root signed so that q(ref, delta) > 0; walls through ref keep the lex-positive sign."""
    out = []
    for r in roots:
        s = sign(r.lattice.pair(ref, r.vector))
        out.append(r.vector if s >= 0 else tuple(-x for x in r.vector))
    return out


@dataclass(frozen=True)
class Reduction:
    omega: IntVector
    word: ReflectionWord
    violated_history: tuple[int, ...]


def chamber_reduce(
    omega: Sequence[int], roots: Sequence[Root], cone: PositiveConeRef, max_steps: int = 1000
) -> Reduction:
    """Reflect omega until q(omega, delta) >= 0 for every supplied (oriented) root."""
    lat = cone.lattice
    omega = tuple(int(x) for x in omega)
    try:
        inside = in_positive_cone(omega, cone)
    except NotOrthogonal as exc:
        raise NotInCone(str(exc)) from exc
    if not inside:
        raise NotInCone("omega is not in the selected positive cone")
    oriented = orient_roots(roots, cone.ref)
    canon = {r.vector: r for r in roots}
    word = ReflectionWord.empty(lat)
    history = []
    for _ in range(max_steps + 1):
        violated = [d for d in oriented if lat.pair(omega, d) < 0]
        history.append(len(violated))
        if not violated:
            return Reduction(omega, word, tuple(history))
        if len(word) == max_steps:
            break
        delta = violated[0]
        root = canon[_sign_canonical(delta)]
        omega = reflect(root, omega)
        word = word.then(root)
    raise StepBudgetExhausted(
        f"chamber reduction did not finish in {max_steps} steps", partial_word=word, partial_vector=omega
    )


def roots_of_picard(p: PeriodPoint, box_bound: int | None, method: str = "auto") -> list[Root]:
    """(-2)-vectors of the Picard lattice of p, one per sign pair, in ambient coordinates."""
    sub = picard_lattice(p)
    return [Root(p.lattice, v) for v in enumerate_norm_vectors(sub, -2, box_bound, method=method)]


def default_frame(lattice: QuadLattice) -> tuple[IntVector, ...]:
    frame = lattice.positive_frame()
    if len(frame) < 3:
        raise NoPositiveThreeSpace(f"signature {lattice.signature()} has fewer than three positive directions")
    return tuple(frame[:3])


def orientation_class(phi: LatticeIsometry, frame: Sequence[Sequence] | None = None) -> int:
    """+1 if phi preserves the orientation of positive three-spaces, else -1.

    With W0 = span(frame), the composite W0 -> phi(W0) -> W0 (q-orthogonal
    projection) has matrix G_W^{-1} (q(w_i, phi w_j)); det G_W > 0, so the
    sign is that of det (q(w_i, phi w_j)).
    """
    lat = phi.lattice
    if frame is None:
        frame = default_frame(lat)
    frame = [tuple(Fraction(x) for x in w) for w in frame]
    if len(frame) != 3:
        raise NoPositiveThreeSpace("a positive three-space needs three vectors")
    gw = lat.gram_of(frame)
    if not (gw[0][0] > 0 and det([r[:2] for r in gw[:2]]) > 0 and det(gw) > 0):
        raise NoPositiveThreeSpace("frame does not span a positive three-space")
    images = [phi.apply(w) if all(x.denominator == 1 for x in w) else _apply_rational(phi, w) for w in frame]
    m = [[lat.pair(wi, pj) for pj in images] for wi in frame]
    s = sign(det(m))
    return 1 if s > 0 else -1


def _apply_rational(phi: LatticeIsometry, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((m * x for m, x in zip(row, v)), Fraction(0)) for row in phi.matrix)
