"""Tilings as colored involution graphs.

A tiling spec is a multigraph on tiles 0..N-1 whose edges carry side
colors 1..r.  Each color class must be a partial perfect matching, so
each color defines an involution of the tile set.  The operator group
generated by these involutions drives everything downstream:
transplantability, unfolding, and the side-count bound.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from isodrum.permgroup import Permutation, PermutationGroup, DEFAULT_ELEMENT_CAP

Edge = tuple[int, int, int]  # (color, low tile, high tile)


class TilingValidationError(ValueError):
    pass


class TilingParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Tiling:
    """A validated tiling spec with canonically sorted edges."""

    tile_count: int
    color_count: int
    edges: tuple[Edge, ...]

    @classmethod
    def build(cls, tile_count: int, color_count: int, edges) -> "Tiling":
        """Validate and normalize raw edge data into a Tiling."""
        if tile_count < 1:
            raise TilingValidationError(f"tile count must be positive, got {tile_count}")
        if color_count < 3:
            raise TilingValidationError(f"need at least 3 colors, got {color_count}")
        normalized = []
        seen = set()
        matched: dict[tuple[int, int], int] = {}
        for mu, i, j in edges:
            if not 1 <= mu <= color_count:
                raise TilingValidationError(
                    f"color {mu} out of range 1..{color_count}"
                )
            if i == j:
                raise TilingValidationError(f"self-loop at tile {i} (color {mu})")
            for v in (i, j):
                if not 0 <= v < tile_count:
                    raise TilingValidationError(
                        f"tile {v} out of range 0..{tile_count - 1}"
                    )
            lo, hi = (i, j) if i < j else (j, i)
            e = (mu, lo, hi)
            if e in seen:
                raise TilingValidationError(f"duplicate edge {e}")
            seen.add(e)
            for v in (lo, hi):
                other = matched.get((mu, v))
                if other is not None:
                    raise TilingValidationError(
                        f"tile {v} has two color-{mu} edges"
                    )
                matched[(mu, v)] = lo + hi - v
            normalized.append(e)
        t = cls(tile_count, color_count, tuple(sorted(normalized)))
        unused = t.unused_colors()
        if unused:
            warnings.warn(
                f"colors with no edges: {sorted(unused)} "
                "(their involutions are the identity)",
                stacklevel=2,
            )
        return t

    def unused_colors(self) -> set[int]:
        used = {mu for mu, _, _ in self.edges}
        return set(range(1, self.color_count + 1)) - used

    def involutions(self) -> list[Permutation]:
        """One involution per color; unmatched tiles stay fixed."""
        maps = [list(range(self.tile_count)) for _ in range(self.color_count)]
        for mu, i, j in self.edges:
            maps[mu - 1][i] = j
            maps[mu - 1][j] = i
        return [Permutation(m) for m in maps]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.tile_count)]
        for _, i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.tile_count

    def is_tree(self) -> bool:
        return len(self.edges) == self.tile_count - 1 and self.is_connected()

    def fixed_point_equation_holds(self) -> bool:
        """(r-2)N + 2 == sum of fixed points over the color involutions.

        For a tree this always holds: each color-mu edge removes two
        fixed points from the identity, so the sum is rN - 2|E| and
        |E| = N - 1.  Conversely a connected spec with more edges
        drops the sum below the tree value.
        """
        total = sum(p.fixed_point_count() for p in self.involutions())
        return (self.color_count - 2) * self.tile_count + 2 == total

    def operator_group(self, cap: int = DEFAULT_ELEMENT_CAP) -> PermutationGroup:
        if not self.is_connected():
            raise TilingValidationError("operator group needs a connected spec")
        return PermutationGroup.closure(self.involutions(), cap=cap)

    def relabeled(self, relabel: Sequence[int], color_map: Sequence[int] | None = None) -> "Tiling":
        """Apply a tile relabeling (and optionally a color permutation).

        ``relabel[i]`` is the new name of tile i; ``color_map[mu-1]`` the
        new name of color mu.
        """
        edges = []
        for mu, i, j in self.edges:
            nm = color_map[mu - 1] if color_map is not None else mu
            a, b = relabel[i], relabel[j]
            edges.append((nm, min(a, b), max(a, b)))
        return Tiling(self.tile_count, self.color_count, tuple(sorted(edges)))


def parse_tiling(text: str, source: str = "<string>") -> Tiling:
    """Parse the text tiling format.

    Line 1 (after comments): ``tiles N colors r``; then one line per
    edge, ``edge MU I J`` with 1-based color and 0-based tiles.  ``#``
    starts a comment.  Raises TilingParseError with the offending line
    number on malformed input, TilingValidationError on semantic
    violations.
    """
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "tiles" or parts[2] != "colors":
                raise TilingParseError("expected 'tiles N colors r'", lineno)
            try:
                header = (int(parts[1]), int(parts[3]))
            except ValueError:
                raise TilingParseError("tile and color counts must be integers", lineno)
            continue
        if parts[0] != "edge" or len(parts) != 4:
            raise TilingParseError("expected 'edge MU I J'", lineno)
        try:
            edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
        except ValueError:
            raise TilingParseError("edge fields must be integers", lineno)
    if header is None:
        raise TilingParseError("missing 'tiles N colors r' header", 1)
    return Tiling.build(header[0], header[1], edges)


def read_tiling_file(path) -> Tiling:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tiling(fh.read(), source=str(path))


def format_tiling(t: Tiling, header: str = "") -> str:
    lines = [f"# {h}".rstrip() for h in header.splitlines()]
    lines.append(f"tiles {t.tile_count} colors {t.color_count}")
    lines.extend(f"edge {mu} {i} {j}" for mu, i, j in t.edges)
    return "\n".join(lines) + "\n"


def write_tiling_file(path, t: Tiling, header: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_tiling(t, header))


# ---------------------------------------------------------------------------
# The side-count bound and the 2-transitive group table
# ---------------------------------------------------------------------------


def side_count_bound(module_points: int, phi: int) -> Fraction:
    """Upper bound 2(N-1)/(N-phi) on the side count r.

    ``module_points`` is the number of points the group acts on and
    ``phi`` the maximal number of fixed points of a nonidentity element.
    """
    if phi < 0:
        raise ValueError(f"phi must be nonnegative, got {phi}")
    if module_points <= phi:
        raise ValueError(
            f"need module_points > phi, got N={module_points}, phi={phi}"
        )
    return Fraction(2 * (module_points - 1), module_points - phi)


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True  # q itself is prime


def _is_odd_power_of(base: int, q: int, min_exponent: int) -> bool:
    e = 0
    m = q
    while m % base == 0 and m > 1:
        m //= base
        e += 1
    return m == 1 and e % 2 == 1 and e >= min_exponent


@dataclass(frozen=True)
class GroupTableRow:
    """One row of the sporadic-and-family table behind the c < 3 argument.

    Concrete rows carry exact integers and a rational bound.  Family
    rows (PSU_3, Sz, R) are parameterized by a prime power q; call
    :meth:`at` to evaluate them, which checks the family's constraint
    on q and returns a concrete row.
    """

    case: int
    name: str
    phi: int | None = None
    module_points: int | None = None
    c_bound: Fraction | None = None
    q: int | None = None
    phi_formula: str | None = None
    points_formula: str | None = None
    q_constraint: str | None = None
    _evaluate: "callable" = field(default=None, repr=False, compare=False)

    @property
    def is_family(self) -> bool:
        return self._evaluate is not None

    def at(self, q: int) -> "GroupTableRow":
        if not self.is_family:
            raise ValueError(f"row {self.name} is concrete; nothing to evaluate")
        phi, pts = self._evaluate(q)
        return GroupTableRow(
            case=self.case,
            name=f"{self.name.split('(')[0]}({q})",
            phi=phi,
            module_points=pts,
            c_bound=side_count_bound(pts, phi),
            q=q,
        )


def _psu3(q: int) -> tuple[int, int]:
    if not _is_prime_power(q):
        raise ValueError(f"PSU_3 needs a prime power q, got {q}")
    return q + 1, q**3 + 1


def _suzuki(q: int) -> tuple[int, int]:
    if not _is_odd_power_of(2, q, 3):
        raise ValueError(f"Sz needs q = 2^(2e+1) with e >= 1, got {q}")
    return q + 1, q**2 + 1


def _ree(q: int) -> tuple[int, int]:
    if not _is_odd_power_of(3, q, 1):
        raise ValueError(f"R needs q = 3^(2e+1) with e >= 0, got {q}")
    return q + 1, q**3 + 1


def _concrete(case: int, name: str, phi: int, pts: int) -> GroupTableRow:
    return GroupTableRow(
        case=case,
        name=name,
        phi=phi,
        module_points=pts,
        c_bound=side_count_bound(pts, phi),
    )


def group_table() -> list[GroupTableRow]:
    """The ten rows: three q-families and seven concrete groups.

    Every row satisfies c = 2(N-1)/(N-phi) < 3, which is what rules
    out transplantable tree pairs with these operator groups for r >= 3.
    """
    return [
        GroupTableRow(
            case=1, name="PSU_3(q)",
            phi_formula="q+1", points_formula="q^3+1",
            q_constraint="q a prime power",
            _evaluate=_psu3,
        ),
        GroupTableRow(
            case=2, name="Sz(q)",
            phi_formula="q+1", points_formula="q^2+1",
            q_constraint="q = 2^(2e+1), e >= 1",
            _evaluate=_suzuki,
        ),
        GroupTableRow(
            case=3, name="R(q)",
            phi_formula="q+1", points_formula="q^3+1",
            q_constraint="q = 3^(2e+1), e >= 0",
            _evaluate=_ree,
        ),
        _concrete(4, "M_11", 3, 11),
        _concrete(5, "M_11", 4, 12),
        _concrete(6, "M_12", 4, 12),
        _concrete(7, "M_23", 7, 23),
        _concrete(8, "M_24", 8, 24),
        _concrete(9, "HS", 16, 176),
        _concrete(10, "CO_3", 36, 276),
    ]


def group_table_at(q: int | None = None) -> list[GroupTableRow]:
    """The table with family rows evaluated at q (skipped if q violates
    a family's constraint); without q only the concrete rows appear."""
    rows = []
    for row in group_table():
        if row.is_family:
            if q is None:
                continue
            try:
                rows.append(row.at(q))
            except ValueError:
                continue
        else:
            rows.append(row)
    return rows
