"""Unfolding tree tilings into planar domains.

Each tile of a validated tree spec becomes a congruent copy of one base
r-gon: the root gets the identity placement, and every tree edge of
color mu reflects the parent's placement across base side mu.  Side k of
the base polygon (between vertices k and k+1) carries color k+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from isodrum.geometry import (
    AffineMap,
    is_convex,
    is_exact,
    is_simple_polygon,
    polygon_signed_area,
    polygons_interiors_disjoint,
    shrink_toward_centroid,
    triangulate,
)
from isodrum.tiling import Tiling, TilingValidationError

EPSILON_SHRINK = 1e-9
FLOAT_KEY_DIGITS = 9


class UnfoldError(ValueError):
    pass


def read_polygon_file(path) -> tuple:
    """Vertices from a polygon file: one 'x y' pair per line, rationals
    like 3/4 allowed, '#' comments ignored."""
    verts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UnfoldError(f"{path}:{lineno}: expected 'x y'")
            try:
                verts.append((Fraction(parts[0]), Fraction(parts[1])))
            except ValueError:
                raise UnfoldError(f"{path}:{lineno}: bad coordinate")
    return tuple(verts)


@dataclass(frozen=True)
class BaseTile:
    """A simple counterclockwise r-gon whose side k has color k+1."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(
            (Fraction(x), Fraction(y)) if is_exact([(x, y)]) else (float(x), float(y))
            for x, y in self.vertices
        )
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise UnfoldError("a base tile needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise UnfoldError("base tile vertices must be distinct")
        if not is_simple_polygon(verts):
            raise UnfoldError("base tile must be a simple polygon")
        if polygon_signed_area(verts) <= 0:
            raise UnfoldError(
                "base tile vertices must be in counterclockwise order"
            )

    @property
    def side_count(self) -> int:
        return len(self.vertices)

    @property
    def exact(self) -> bool:
        return is_exact(self.vertices)

    def side(self, color: int) -> tuple:
        """Endpoints of the side carrying the given 1-based color."""
        if not 1 <= color <= self.side_count:
            raise ValueError(f"color {color} out of range")
        k = color - 1
        return self.vertices[k], self.vertices[(k + 1) % self.side_count]

    def area(self):
        return polygon_signed_area(self.vertices)

    @classmethod
    def right_triangle(cls) -> "BaseTile":
        """The default 3-color tile: legs on the axes, hypotenuse color 2."""
        return cls(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                    (Fraction(0), Fraction(1))))

    @classmethod
    def regular(cls, sides: int) -> "BaseTile":
        """Regular polygon with unit circumradius, first vertex at angle
        -pi/2 + pi/sides so one side sits at the bottom.  The square is
        special-cased to the exact unit square; other side counts have
        irrational vertices and use floats."""
        if sides < 3:
            raise UnfoldError("need at least 3 sides")
        if sides == 3:
            return cls.right_triangle()
        if sides == 4:
            return cls(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                        (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))))
        start = -math.pi / 2 + math.pi / sides
        return cls(tuple(
            (math.cos(start + 2 * math.pi * k / sides),
             math.sin(start + 2 * math.pi * k / sides))
            for k in range(sides)
        ))

    @classmethod
    def for_spec(cls, spec: Tiling) -> "BaseTile":
        return cls.regular(spec.color_count)

    @classmethod
    def from_file(cls, path) -> "BaseTile":
        """Read one 'x y' pair per line; values may be rationals like 3/4."""
        return cls(read_polygon_file(path))


@dataclass(frozen=True)
class PlacedTile:
    tile_index: int
    transform: AffineMap

    @property
    def parity(self) -> int:
        return self.transform.parity

    def vertices(self, base: BaseTile) -> tuple:
        return tuple(self.transform.apply(v) for v in base.vertices)

    def ccw_vertices(self, base: BaseTile) -> tuple:
        """Placed vertices reordered counterclockwise (reflections flip)."""
        verts = self.vertices(base)
        return tuple(reversed(verts)) if self.parity == 1 else verts


@dataclass(frozen=True)
class UnfoldedDomain:
    spec: Tiling
    base: BaseTile
    placements: tuple
    embedded: bool
    boundary: tuple | None

    def area(self):
        if self.boundary is None:
            raise UnfoldError("no boundary: domain is not embedded")
        return polygon_signed_area(self.boundary)


def unfold(spec: Tiling, base: BaseTile | None = None, root: int = 0) -> list[PlacedTile]:
    """Placements for every tile, root first, in breadth-first order.

    The spec must be a tree: a cycle would prescribe two different
    transforms for some tile.
    """
    if base is None:
        base = BaseTile.for_spec(spec)
    if base.side_count != spec.color_count:
        raise UnfoldError(
            f"base tile has {base.side_count} sides, spec has "
            f"{spec.color_count} colors"
        )
    if not spec.is_tree():
        raise UnfoldError("only tree specs unfold consistently")
    if not 0 <= root < spec.tile_count:
        raise UnfoldError(f"root {root} out of range")

    # neighbors sorted by color for a deterministic traversal
    neighbors: list[list[tuple[int, int]]] = [[] for _ in range(spec.tile_count)]
    for mu, i, j in spec.edges:
        neighbors[i].append((mu, j))
        neighbors[j].append((mu, i))
    for lst in neighbors:
        lst.sort()

    transforms: dict[int, AffineMap] = {root: AffineMap.identity()}
    queue = [root]
    head = 0
    order = [root]
    while head < len(queue):
        i = queue[head]
        head += 1
        for mu, j in neighbors[i]:
            if j in transforms:
                continue
            p, q = base.side(mu)
            transforms[j] = transforms[i].compose(AffineMap.reflection_across(p, q))
            queue.append(j)
            order.append(j)
    return [PlacedTile(i, transforms[i]) for i in order]


def check_embedding(placements, base: BaseTile) -> bool:
    """Pairwise interior disjointness of the placed tiles.

    Exact separating-axis / triangulation tests on rational data; float
    tiles are shrunk toward their centroid by a relative 1e-9 before
    testing, trading a sliver of soundness for robustness.
    """
    exact = base.exact
    polys = []
    for pt in placements:
        verts = list(pt.ccw_vertices(base))
        if not exact:
            verts = shrink_toward_centroid(verts, 1 - EPSILON_SHRINK)
        polys.append(verts)
    convex = is_convex(base.vertices)
    tris = None
    if not convex:
        tris = [triangulate(p) for p in polys]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            disjoint = polygons_interiors_disjoint(
                polys[i], polys[j], convex,
                tris_a=None if convex else tris[i],
                tris_b=None if convex else tris[j],
            )
            if not disjoint:
                return False
    return True


def _point_key(p, exact: bool):
    if exact:
        return p
    return (round(p[0], FLOAT_KEY_DIGITS), round(p[1], FLOAT_KEY_DIGITS))


def boundary_polygon(placements, base: BaseTile) -> tuple:
    """Outer boundary of the union as a closed counterclockwise vertex list.

    Directed edges of the CCW-oriented placed tiles cancel in pairs along
    glued sides; the survivors must chain into a single simple cycle.
    Raises UnfoldError if the placements do not embed or the boundary is
    not one cycle (e.g. the union pinches or has a hole).
    """
    if not check_embedding(placements, base):
        raise UnfoldError("placements overlap: no boundary polygon")
    exact = base.exact
    undirected: dict = {}
    for pt in placements:
        verts = pt.ccw_vertices(base)
        n = len(verts)
        for k in range(n):
            a, b = verts[k], verts[(k + 1) % n]
            ka, kb = _point_key(a, exact), _point_key(b, exact)
            key = (min(ka, kb), max(ka, kb))
            undirected.setdefault(key, []).append((ka, kb, a, b))
    outgoing: dict = {}
    points: dict = {}
    for key, hits in undirected.items():
        if len(hits) == 1:
            ka, kb, a, b = hits[0]
            if ka in outgoing:
                raise UnfoldError(
                    "boundary is not a simple cycle (pinched vertex)"
                )
            outgoing[ka] = kb
            points[ka] = a
            points.setdefault(kb, b)
        elif len(hits) > 2:
            raise UnfoldError("an edge is shared by more than two tiles")
    if not outgoing:
        raise UnfoldError("no boundary edges found")
    start = min(outgoing)
    cycle = [start]
    cur = outgoing[start]
    while cur != start:
        cycle.append(cur)
        nxt = outgoing.get(cur)
        if nxt is None:
            raise UnfoldError("boundary chain broke; edges do not close up")
        cur = nxt
    if len(cycle) != len(outgoing):
        raise UnfoldError(
            "boundary has several cycles; the union is not simply connected"
        )
    return tuple(points[k] for k in cycle)


def unfold_domain(spec: Tiling, base: BaseTile | None = None, root: int = 0) -> UnfoldedDomain:
    """Unfold, test embedding, and extract the boundary in one call."""
    if base is None:
        base = BaseTile.for_spec(spec)
    placements = tuple(unfold(spec, base, root))
    embedded = check_embedding(placements, base)
    boundary = boundary_polygon(placements, base) if embedded else None
    return UnfoldedDomain(spec, base, placements, embedded, boundary)


# ---------------------------------------------------------------------------
# SVG export
# ---------------------------------------------------------------------------

_EDGE_PALETTE = (
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b",
)


def _fmt(value) -> str:
    return f"{float(value):.6f}"


def export_svg(domain: UnfoldedDomain, path) -> None:
    """Write a deterministic SVG: tile outlines, colored glued sides, and
    the boundary emphasized."""
    if not domain.embedded or domain.boundary is None:
        raise UnfoldError("refusing to draw a non-embedded domain")
    base = domain.base
    all_pts = [p for pt in domain.placements for p in pt.vertices(base)]
    xs = [float(p[0]) for p in all_pts]
    ys = [float(p[1]) for p in all_pts]
    margin = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x0, y0 = min(xs) - margin, min(ys) - margin
    w = (max(xs) - min(xs)) + 2 * margin
    h = (max(ys) - min(ys)) + 2 * margin

    glued: dict[tuple[int, int], int] = {}
    for mu, i, j in domain.spec.edges:
        glued[(i, j)] = mu
    transforms = {pt.tile_index: pt.transform for pt in domain.placements}

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
        f'width="480" height="480">',
        # flip y so the mathematical orientation reads normally
        f'<g transform="translate(0 {_fmt(2 * y0 + h)}) scale(1 -1)">',
    ]
    for pt in domain.placements:
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pt.vertices(base))
        lines.append(
            f'<polygon points="{pts}" fill="#f5f5f0" stroke="#999999" '
            f'stroke-width="{_fmt(0.01 * max(w, h))}"/>'
        )
    for (i, j), mu in sorted(glued.items()):
        p, q = base.side(mu)
        a = transforms[i].apply(p)
        b = transforms[i].apply(q)
        color = _EDGE_PALETTE[(mu - 1) % len(_EDGE_PALETTE)]
        lines.append(
            f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
            f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}" stroke="{color}" '
            f'stroke-width="{_fmt(0.015 * max(w, h))}"/>'
        )
    boundary_pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in domain.boundary)
    lines.append(
        f'<polygon points="{boundary_pts}" fill="none" stroke="#000000" '
        f'stroke-width="{_fmt(0.02 * max(w, h))}"/>'
    )
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
