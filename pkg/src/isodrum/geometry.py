"""Planar geometry primitives for unfolding: exact when coordinates are
rational, tolerance-based otherwise.

Points are (x, y) pairs of Fractions (exact path) or floats.  Every
predicate below works identically on both; the exact path never rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Point = tuple  # (x, y)


def is_exact(points) -> bool:
    return all(isinstance(c, (Fraction, int)) for p in points for c in p)


@dataclass(frozen=True)
class AffineMap:
    """Planar affine map (x, y) -> (a x + b y + tx, c x + d y + ty).

    ``reflections`` counts the reflections composed into the map, so the
    orthogonal part has determinant (-1)**reflections for isometries
    built from :meth:`reflection_across`.
    """

    a: object
    b: object
    c: object
    d: object
    tx: object
    ty: object
    reflections: int = 0

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1),
                   Fraction(0), Fraction(0), 0)

    @classmethod
    def reflection_across(cls, p: Point, q: Point) -> "AffineMap":
        """Reflection across the line through p and q (p != q).

        Uses only field operations, so rational inputs give an exact map
        (integer coordinates are promoted to Fractions first).
        """
        if is_exact((p, q)):
            p = (Fraction(p[0]), Fraction(p[1]))
            q = (Fraction(q[0]), Fraction(q[1]))
        dx = q[0] - p[0]
        dy = q[1] - p[1]
        norm = dx * dx + dy * dy
        if norm == 0:
            raise ValueError("reflection line needs two distinct points")
        a = (dx * dx - dy * dy) / norm
        b = 2 * dx * dy / norm
        # orthogonal part [[a, b], [b, -a]]; translation fixes p
        tx = p[0] - (a * p[0] + b * p[1])
        ty = p[1] - (b * p[0] - a * p[1])
        return cls(a, b, b, -a, tx, ty, 1)

    def apply(self, pt: Point) -> Point:
        x, y = pt
        return (self.a * x + self.b * y + self.tx,
                self.c * x + self.d * y + self.ty)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (self.compose(other)).apply = self(other(pt))."""
        return AffineMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.a * other.tx + self.b * other.ty + self.tx,
            self.c * other.tx + self.d * other.ty + self.ty,
            self.reflections + other.reflections,
        )

    def inverse(self) -> "AffineMap":
        det = self.a * self.d - self.b * self.c
        if det == 0:
            raise ValueError("singular map")
        ia, ib = self.d / det, -self.b / det
        ic, id_ = -self.c / det, self.a / det
        return AffineMap(
            ia, ib, ic, id_,
            -(ia * self.tx + ib * self.ty),
            -(ic * self.tx + id_ * self.ty),
            self.reflections,
        )

    def orthogonal_determinant(self):
        return self.a * self.d - self.b * self.c

    @property
    def parity(self) -> int:
        return self.reflections % 2


def polygon_signed_area(points) :
    """Shoelace signed area; positive for counterclockwise orientation."""
    total = 0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total / 2 if isinstance(total, float) else Fraction(total, 2)


def orientation(a: Point, b: Point, c: Point):
    """Cross product (b-a) x (c-a): positive = left turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Whether p lies on the closed segment ab (exact for rational input)."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_properly_cross(p1, p2, q1, q2) -> bool:
    """Open segments crossing at a single interior point."""
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    return ((o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0
            and (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0)


def is_simple_polygon(points) -> bool:
    n = len(points)
    if n < 3:
        return False
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a1, a2 = edges[i]
        if a1 == a2:
            return False
        for j in range(i + 1, n):
            b1, b2 = edges[j]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if segments_properly_cross(a1, a2, b1, b2):
                return False
            if not adjacent:
                # non-adjacent edges may not touch at all
                if (on_segment(b1, a1, a2) or on_segment(b2, a1, a2)
                        or on_segment(a1, b1, b2) or on_segment(a2, b1, b2)):
                    return False
            else:
                # adjacent edges share exactly their common endpoint
                shared = a2 if j == i + 1 else a1
                other_b = b2 if j == i + 1 else b1
                if on_segment(other_b, a1, a2) and other_b != shared:
                    return False
    return True


def is_convex(points) -> bool:
    n = len(points)
    sign = 0
    for i in range(n):
        o = orientation(points[i], points[(i + 1) % n], points[(i + 2) % n])
        if o == 0:
            continue
        s = 1 if o > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return sign != 0


def point_in_polygon(p: Point, points) -> str:
    """Classify p against a simple polygon: 'inside', 'boundary', 'outside'.

    Crossing-number scan, exact on rational input: an edge is counted
    when it spans the horizontal line through p, and the crossing
    abscissa is compared exactly.
    """
    n = len(points)
    for i in range(n):
        if on_segment(p, points[i], points[(i + 1) % n]):
            return "boundary"
    crossings = 0
    px, py = p
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if x_cross > px:
                crossings += 1
    return "inside" if crossings % 2 == 1 else "outside"


def _project(points, ax, ay):
    lo = hi = points[0][0] * ax + points[0][1] * ay
    for x, y in points[1:]:
        v = x * ax + y * ay
        if v < lo:
            lo = v
        elif v > hi:
            hi = v
    return lo, hi


def convex_interiors_disjoint(poly_a, poly_b) -> bool:
    """Separating-axis test: True iff the open interiors do not meet.

    Both polygons must be convex.  Touching along boundaries counts as
    disjoint.  Exact for rational coordinates.
    """
    for poly in (poly_a, poly_b):
        n = len(poly)
        for i in range(n):
            x1, y1 = poly[i]
            x2, y2 = poly[(i + 1) % n]
            ax, ay = y2 - y1, x1 - x2  # edge normal, unnormalized
            if ax == 0 and ay == 0:
                continue
            lo_a, hi_a = _project(poly_a, ax, ay)
            lo_b, hi_b = _project(poly_b, ax, ay)
            if hi_a <= lo_b or hi_b <= lo_a:
                return True
    return False


def triangulate(points) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation of a simple CCW polygon (exact)."""
    pts = list(points)
    if polygon_signed_area(pts) <= 0:
        raise ValueError("triangulation needs a counterclockwise simple polygon")
    tris = []
    idx = list(range(len(pts)))
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10000:
            raise ValueError("ear clipping failed; polygon may not be simple")
        n = len(idx)
        clipped = False
        for k in range(n):
            i0, i1, i2 = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if orientation(a, b, c) <= 0:
                continue
            ear = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if point_in_polygon(pts[j], [a, b, c]) != "outside":
                    ear = False
                    break
            if ear:
                tris.append((a, b, c))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise ValueError("no ear found; polygon may not be simple")
    tris.append((pts[idx[0]], pts[idx[1]], pts[idx[2]]))
    return tris


def shrink_toward_centroid(points, factor):
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return [(cx + (x - cx) * factor, cy + (y - cy) * factor) for x, y in points]


def polygons_interiors_disjoint(poly_a, poly_b, convex: bool,
                                tris_a=None, tris_b=None) -> bool:
    """Interior disjointness for two simple polygons.

    Convex polygons go straight to the separating-axis test; non-convex
    ones are compared triangle against triangle using the given (or
    freshly computed) triangulations.
    """
    if convex:
        return convex_interiors_disjoint(poly_a, poly_b)
    tris_a = tris_a if tris_a is not None else triangulate(poly_a)
    tris_b = tris_b if tris_b is not None else triangulate(poly_b)
    for ta in tris_a:
        for tb in tris_b:
            if not convex_interiors_disjoint(ta, tb):
                return False
    return True


def polygons_congruent(poly_a, poly_b, tol: float = 1e-9) -> bool:
    """Whether two simple polygons are congruent as plane figures.

    Tries every vertex correspondence: cyclic shifts for direct
    isometries and shifts of the x-mirrored polygon for the
    orientation-reversing ones.  Reflected matches count as congruent
    (a mirrored drum sounds the same), so callers that care about
    chirality need a separate orientation check.  Float comparison with
    ``tol``; exact inputs are converted.
    """
    a = [(float(x), float(y)) for x, y in poly_a]
    b = [(float(x), float(y)) for x, y in poly_b]
    n = len(a)
    if n != len(b):
        return False

    def fits(src, dst):
        ax, ay = src[0]
        bx, by = src[1]
        cx, cy = dst[0]
        dx, dy = dst[1]
        if abs(math.hypot(bx - ax, by - ay) - math.hypot(dx - cx, dy - cy)) > tol:
            return False
        ang = math.atan2(dy - cy, dx - cx) - math.atan2(by - ay, bx - ax)
        cos_t, sin_t = math.cos(ang), math.sin(ang)
        return all(
            abs(cos_t * (px - ax) - sin_t * (py - ay) + cx - qx) <= tol
            and abs(sin_t * (px - ax) + cos_t * (py - ay) + cy - qy) <= tol
            for (px, py), (qx, qy) in zip(src, dst)
        )

    mirrored = [(x, -y) for x, y in reversed(a)]
    for shift in range(n):
        shifted = b[shift:] + b[:shift]
        if fits(a, shifted) or fits(mirrored, shifted):
            return True
    return False
