"""Newton polyhedra of bivariate Puiseux polynomials, computed exactly.

The polyhedron is stored as its boundary chain: an upper-left ray, the compact
edges (vertices in order of decreasing ``t2``), and a horizontal ray to the
right.  For an ordinary Newton polyhedron the upper-left ray is vertical; the
augmented polyhedron replaces it by a half-line of slope ``1/m``.

Everything boundary-related reduces to a list of half-planes
``k1*t1 + k2*t2 >= c`` with ``k1, k2 >= 0``, which makes intersections with
diagonal lines ``(t, t + s)`` a one-line maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .poly import PuiseuxPoly, RationalLike, as_fraction, exact_power

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True, order=True)
class Weight:
    """Positive weight ``(k1, k2)``; its line is ``k1*t1 + k2*t2 = 1``."""

    k1: Fraction
    k2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "k1", as_fraction(self.k1))
        object.__setattr__(self, "k2", as_fraction(self.k2))
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError(f"weight components must be positive, got {(self.k1, self.k2)}")

    @property
    def m(self) -> Fraction:
        return self.k2 / self.k1

    @property
    def norm(self) -> Fraction:
        """``|kappa| = k1 + k2``."""
        return self.k1 + self.k2

    def degree(self, t: Sequence[RationalLike]) -> Fraction:
        return self.k1 * as_fraction(t[0]) + self.k2 * as_fraction(t[1])

    @staticmethod
    def through(a: Point, b: Point) -> "Weight":
        """The weight whose line passes through ``a`` and ``b``."""
        a1, a2 = a
        b1, b2 = b
        det = a1 * b2 - a2 * b1
        if det == 0:
            raise ValueError(f"points {a}, {b} are collinear with the origin")
        return Weight((b2 - a2) / det, (a1 - b1) / det)


class NoFiniteWeight(ValueError):
    """The face has no weight with both components positive (vertex, ray, or axis-parallel)."""


@dataclass(frozen=True)
class Edge:
    left: Point
    right: Point
    weight: Weight

    @property
    def slope(self) -> Fraction:
        """Modulus of the slope, ``k1/k2``."""
        return self.weight.k1 / self.weight.k2


@dataclass(frozen=True)
class Face:
    kind: Literal["vertex", "edge", "ray"]
    geometry: tuple[Point, ...]
    weight: Optional[Weight] = None


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Boundary chain of ``conv(support) + [0, oo)^2`` (or its augmentation).

    ``left_ray`` is the direction of the unbounded upper-left part of the
    boundary, ``(0, 1)`` for ordinary polyhedra.  ``left_weight`` is set when
    that ray is a slanted half-line lying on the line of that weight.
    """

    vertices: tuple[Point, ...]
    edges: tuple[Edge, ...]
    left_ray: Point = (Fraction(0), Fraction(1))
    right_ray: Point = (Fraction(1), Fraction(0))
    left_weight: Optional[Weight] = None

    @property
    def rays(self) -> tuple[Point, Point]:
        return (self.left_ray, self.right_ray)

    def halfplanes(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Triples ``(k1, k2, c)`` with the polyhedron equal to ``{k1 t1 + k2 t2 >= c}``."""
        first, last = self.vertices[0], self.vertices[-1]
        hp = []
        if self.left_weight is None:
            hp.append((Fraction(1), Fraction(0), first[0]))
        else:
            hp.append((self.left_weight.k1, self.left_weight.k2, Fraction(1)))
        hp.extend((e.weight.k1, e.weight.k2, Fraction(1)) for e in self.edges)
        hp.append((Fraction(0), Fraction(1), last[1]))
        return hp

    def contains(self, t: Sequence[RationalLike]) -> bool:
        t1, t2 = (as_fraction(x) for x in t)
        return all(k1 * t1 + k2 * t2 >= c for k1, k2, c in self.halfplanes())

    def diagonal_hit(self, shift: RationalLike = 0) -> Point:
        """First point of the line ``(t, t + shift)`` inside the polyhedron (a boundary point)."""
        s = as_fraction(shift)
        t = max((c - k2 * s) / (k1 + k2) for k1, k2, c in self.halfplanes())
        return (t, t + s)


def newton_polyhedron_from_points(points) -> NewtonPolyhedron:
    pts = {(as_fraction(a), as_fraction(b)) for a, b in points}
    if not pts:
        raise ValueError("Newton polyhedron of the zero polynomial is undefined")
    # staircase: for increasing t1 keep only points that strictly lower t2
    stair: list[Point] = []
    for p in sorted(pts):
        if not stair or p[1] < stair[-1][1]:
            stair.append(p)
    hull: list[Point] = []
    for p in stair:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    edges = tuple(Edge(a, b, Weight.through(a, b)) for a, b in zip(hull, hull[1:]))
    return NewtonPolyhedron(vertices=tuple(hull), edges=edges)


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polyhedron(p: PuiseuxPoly) -> NewtonPolyhedron:
    """Exact Newton polyhedron of ``p``; vertices ordered by decreasing ``t2``."""
    if not p:
        raise ValueError("Newton polyhedron of the zero polynomial is undefined")
    return newton_polyhedron_from_points(p.support())


def principal_face(np_: NewtonPolyhedron) -> Face:
    """Face of minimal dimension meeting the bisectrix ``t1 = t2``.

    When the bisectrix passes through a vertex, that vertex is returned.  If it
    meets an unbounded ray, a ``ray`` face anchored at the ray's vertex is returned.
    """
    for v in np_.vertices:
        if v[0] == v[1]:
            return Face("vertex", (v,))
    for e in np_.edges:
        if e.left[0] < e.left[1] and e.right[0] > e.right[1]:
            return Face("edge", (e.left, e.right), e.weight)
    first, last = np_.vertices[0], np_.vertices[-1]
    if first[0] > first[1]:
        if np_.left_weight is not None:
            return Face("edge", (first,), np_.left_weight)
        return Face("ray", (first,))
    return Face("ray", (last,))


def newton_distance(np_: NewtonPolyhedron) -> Fraction:
    """The ``d`` with ``(d, d)`` on the boundary."""
    return np_.diagonal_hit(0)[0]


def principal_weight(face: Face) -> Weight:
    if face.kind != "edge" or face.weight is None:
        raise NoFiniteWeight(f"{face.kind} face carries no finite weight")
    return face.weight


def supported_face(np_: NewtonPolyhedron, w: Weight) -> Optional[Face]:
    """``L ∩ N`` for the line ``L`` of ``w``, or ``None`` when ``L`` does not support ``N``."""
    degs = [w.degree(v) for v in np_.vertices]
    low = min(degs)
    if low != 1:
        return None
    touching = tuple(v for v, dg in zip(np_.vertices, degs) if dg == 1)
    if len(touching) == 1:
        return Face("vertex", touching)
    return Face("edge", (touching[0], touching[-1]), w)


def kappa_principal_part(p: PuiseuxPoly, w: Weight) -> PuiseuxPoly:
    """Sum of the terms of ``w``-degree exactly 1."""
    return PuiseuxPoly((e, c) for e, c in p.items() if w.degree(e) == 1)


def dilate(p: PuiseuxPoly, w: Weight, r: RationalLike) -> PuiseuxPoly:
    """``p(r^k1 x1, r^k2 x2)``: each coefficient is scaled by ``r^(k . t)``.

    ``r`` must be such that every power ``r^(k . t)`` is rational.
    """
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("dilation parameter must be positive")
    return PuiseuxPoly((e, c * exact_power(r, w.degree(e))) for e, c in p.items())


def augmented_polyhedron(np_tilde: NewtonPolyhedron, L_weight: Weight) -> NewtonPolyhedron:
    """Hull of ``np_tilde`` and the half-line ``L+`` of ``L_weight`` ending at ``(A+, B+)``.

    ``(A+, B+)`` is the right endpoint of ``L ∩ np_tilde``.  Raises ``ValueError``
    when ``L`` is not a supporting line.
    """
    face = supported_face(np_tilde, L_weight)
    if face is None:
        raise ValueError(f"line of {L_weight} does not support the polyhedron")
    right = face.geometry[-1]
    idx = np_tilde.vertices.index(right)
    vertices = np_tilde.vertices[idx:]
    edges = tuple(e for e in np_tilde.edges if e.left[0] >= right[0])
    return NewtonPolyhedron(
        vertices=vertices,
        edges=edges,
        left_ray=(-L_weight.k2, L_weight.k1),
        left_weight=L_weight,
    )


def r_height(np_r: NewtonPolyhedron, m: RationalLike) -> Fraction:
    """``h^r``: ``h^r + 1`` is the ``t2`` of the point where ``(t, t+m+1)`` meets the boundary."""
    m = as_fraction(m)
    return np_r.diagonal_hit(m + 1)[1] - 1


__all__ = [
    "Weight",
    "Edge",
    "Face",
    "NewtonPolyhedron",
    "NoFiniteWeight",
    "newton_polyhedron",
    "newton_polyhedron_from_points",
    "principal_face",
    "newton_distance",
    "principal_weight",
    "supported_face",
    "kappa_principal_part",
    "dilate",
    "augmented_polyhedron",
    "r_height",
]
