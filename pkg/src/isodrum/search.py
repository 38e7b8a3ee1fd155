"""Desk-scale exhaustive search: enumerate tree tilings, canonicalize,
and pair them by transplantability.

The enumeration walks labeled trees by Prufer sequence, keeps one
representative per tree isomorphism class, colors its edges so that no
vertex sees a color twice, and reduces every colored spec to a canonical
form.  Pairing then classifies canonical specs against each other,
modulo a simultaneous recoloring when color-permutation equivalence is
on (recoloring both domains just renames the base tile's sides).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

from isodrum.permgroup import (
    GroupTooLargeError,
    NotHomomorphicError,
    PermutationGroup,
    Subgroup,
    GassmannTriple,
    almost_conjugate,
    permutation_character_equal,
)
from isodrum.tiling import Tiling
from isodrum.transplant import (
    PairClassification,
    Verdict,
    classify_pair,
)

DEFAULT_ENUMERATION_BUDGET = 200_000
DEFAULT_SUBGROUP_BUDGET = 100_000
DEFAULT_MAX_TILES = 13


class BudgetExceededError(RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# Labeled trees and their isomorphism classes
# ---------------------------------------------------------------------------


def tree_from_prufer(seq, n):
    """Edges of the labeled tree with the given Prufer sequence."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = sorted(heapq.heappop(leaves) for _ in range(2))
    edges.append((u, w))
    return tuple(edges)


def _ahu_key(adj, root, parent):
    children = sorted(
        _ahu_key(adj, c, root) for c in adj[root] if c != parent
    )
    return tuple(children)


def tree_isomorphism_key(edges, n):
    """Canonical key of an unlabeled tree: AHU encoding from the centroid."""
    if n == 1:
        return ("single",)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    # find centroid(s) by repeatedly stripping leaves
    degree = [len(a) for a in adj]
    alive = n
    layer = [v for v in range(n) if degree[v] <= 1]
    removed = [False] * n
    while alive > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            alive -= 1
            for w in adj[v]:
                if not removed[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [v for v in range(n) if not removed[v]]
    return min(_ahu_key(adj, c, -1) for c in centers)


def labeled_tree_classes(n):
    """One labeled representative per tree isomorphism class on n vertices."""
    if n == 1:
        return [[]]
    if n == 2:
        return [[(0, 1)]]
    reps = {}
    for seq in itertools.product(range(n), repeat=n - 2):
        edges = tree_from_prufer(seq, n)
        key = tree_isomorphism_key(edges, n)
        if key not in reps:
            reps[key] = edges
    return [reps[k] for k in sorted(reps)]


def _edge_colorings(edges, n, colors):
    """All assignments of one color per edge leaving every (vertex, color)
    pair used at most once; yields tuples aligned with ``edges``."""
    used = set()
    assignment = [0] * len(edges)

    def rec(k):
        if k == len(edges):
            yield tuple(assignment)
            return
        u, v = edges[k]
        for mu in range(1, colors + 1):
            if (mu, u) in used or (mu, v) in used:
                continue
            used.add((mu, u))
            used.add((mu, v))
            assignment[k] = mu
            yield from rec(k + 1)
            used.discard((mu, u))
            used.discard((mu, v))

    yield from rec(0)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


def _min_relabeled_edge_keys(spec: Tiling):
    """Minimal edge-key list over all vertex relabelings.

    Keys are (max endpoint, color, min endpoint) under the new labels,
    listed in ascending order.  Assigning new labels one at a time makes
    the key list grow monotonically (every edge closed at step k has max
    key k), so branch-and-bound with prefix comparison is exact.
    """
    n = spec.tile_count
    adj = [[] for _ in range(n)]
    for mu, i, j in spec.edges:
        adj[i].append((mu, j))
        adj[j].append((mu, i))

    best: list | None = None
    old_to_new = [-1] * n
    assigned: list[int] = []

    def rec(prefix):
        nonlocal best
        k = len(assigned)
        if k == n:
            if best is None or prefix < best:
                best = list(prefix)
            return
        for v in range(n):
            if old_to_new[v] >= 0:
                continue
            added = sorted(
                (k, mu, old_to_new[u])
                for mu, u in adj[v]
                if old_to_new[u] >= 0
            )
            candidate = prefix + added
            if best is not None:
                head = best[: len(candidate)]
                if candidate > head:
                    continue
                if candidate == head and len(best) > len(candidate) \
                        and best[len(candidate)][0] < k + 1:
                    # every future edge closes at a label >= k+1, but the
                    # incumbent's next key is earlier: cannot improve
                    continue
            old_to_new[v] = k
            assigned.append(v)
            rec(candidate)
            assigned.pop()
            old_to_new[v] = -1

    rec([])
    return best


def canonical_form(spec: Tiling, mod_colors: bool = True) -> Tiling:
    """Canonical representative modulo vertex relabeling (and, if enabled,
    color permutation).  Idempotent and equivalence-invariant; two specs
    are equivalent exactly when their canonical forms are equal."""
    identity = range(spec.tile_count)
    if mod_colors:
        variants = [
            spec.relabeled(identity, perm)
            for perm in itertools.permutations(range(1, spec.color_count + 1))
        ]
    else:
        variants = [spec]
    best_keys = None
    for variant in variants:
        keys = _min_relabeled_edge_keys(variant)
        if best_keys is None or keys < best_keys:
            best_keys = keys
    edges = tuple(sorted((mu, lo, hi) for hi, mu, lo in best_keys))
    return Tiling(spec.tile_count, spec.color_count, edges)


def enumerate_tree_tilings(
    tiles: int,
    colors: int,
    mod_colors: bool = True,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    max_tiles: int = DEFAULT_MAX_TILES,
) -> list[Tiling]:
    """All tree tilings on the given tile count, up to equivalence.

    Deterministic ascending output.  Raises BudgetExceededError (with
    the partial result attached) rather than silently truncating.
    """
    if tiles < 1:
        raise ValueError("need at least one tile")
    if tiles > max_tiles:
        raise ValueError(
            f"{tiles} tiles exceeds the configured cap {max_tiles}"
        )
    if colors < 3:
        raise ValueError("need at least 3 colors")
    seen: dict[tuple, Tiling] = {}
    spent = 0
    for edges in labeled_tree_classes(tiles):
        for coloring in _edge_colorings(edges, tiles, colors):
            spent += 1
            if spent > budget:
                raise BudgetExceededError(
                    f"enumeration budget {budget} exceeded",
                    partial=sorted(seen.values(), key=lambda t: t.edges),
                )
            colored = tuple(
                (mu, u, v) for mu, (u, v) in zip(coloring, edges)
            )
            spec = Tiling(tiles, colors, tuple(sorted(colored)))
            canon = canonical_form(spec, mod_colors=mod_colors)
            seen.setdefault(canon.edges, canon)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# Pair catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairCatalogEntry:
    """One transplantable noncongruent pair.

    ``spec_b`` is the recoloring of the canonical second spec that the
    witness actually intertwines with ``spec_a`` (recoloring both
    domains of a pair together only renames base-tile sides, so the
    catalog identity ``canonical_b`` stays the canonical form).
    """

    spec_a: Tiling
    spec_b: Tiling
    canonical_b: Tiling
    result: PairClassification
    group_order: int
    two_transitive: bool

    def as_dict(self) -> dict:
        from isodrum.tiling import format_tiling

        return {
            "specA": format_tiling(self.spec_a),
            "specB": format_tiling(self.spec_b),
            "verdict": self.result.verdict.value,
            "intertwinerDimension": self.result.intertwiner_dimension,
            "groupOrder": self.group_order,
            "twoTransitive": self.two_transitive,
        }


@dataclass(frozen=True)
class PairCatalog:
    entries: tuple

    def __len__(self):
        return len(self.entries)


def _recolor(spec: Tiling, perm) -> Tiling:
    return spec.relabeled(range(spec.tile_count), perm)


def build_pair_catalog(specs, mod_colors: bool = True) -> PairCatalog:
    """Classify every unordered pair of the given (deduplicated) specs.

    With mod-colors on, a canonical spec paired against a nontrivial
    recoloring of itself is also a candidate: recoloring changes which
    base-tile side each reflection crosses, so the two drums can be
    genuinely noncongruent even though the colored graphs agree up to a
    color permutation.  Each index pair (including the diagonal) yields
    at most one entry, for the first recoloring that certifies.

    Cheap necessary conditions run first: identical per-color fixed
    point counts and equal operator-group orders, then equality of the
    permutation characters under a simultaneous closure.  Only the
    survivors get the exact intertwiner computation.  Every retained
    entry is TransplantableNoncongruent with an exact witness.
    """
    specs = list(specs)
    if not specs:
        return PairCatalog(())
    n = specs[0].tile_count
    r = specs[0].color_count
    for s in specs:
        if s.tile_count != n or s.color_count != r:
            raise ValueError("catalog specs must share tile and color counts")

    groups = [s.operator_group() for s in specs]
    fixed = [
        tuple(p.fixed_point_count() for p in s.involutions()) for s in specs
    ]
    identity_perm = tuple(range(1, r + 1))
    color_perms = (
        list(itertools.permutations(range(1, r + 1)))
        if mod_colors
        else [identity_perm]
    )

    entries = []
    for i in range(len(specs)):
        for j in range(i, len(specs)):
            if groups[i].order != groups[j].order:
                continue
            for perm in color_perms:
                if i == j and perm == identity_perm:
                    continue
                permuted_fixed = tuple(fixed[j][perm[mu] - 1] for mu in range(r))
                if permuted_fixed != fixed[i]:
                    continue
                recolored = _recolor(specs[j], perm)
                try:
                    same_character = permutation_character_equal(
                        groups[i], specs[i].involutions(), recolored.involutions()
                    )
                except NotHomomorphicError:
                    continue
                if not same_character:
                    continue
                result = classify_pair(specs[i], recolored)
                if result.verdict is Verdict.CONGRUENT:
                    if i < j:
                        raise AssertionError(
                            "distinct canonical specs cannot be congruent"
                        )
                    # a color-permuting graph automorphism; keep scanning
                    continue
                if result.verdict is not Verdict.TRANSPLANTABLE_NONCONGRUENT:
                    raise AssertionError(
                        "character-equal pair must admit an invertible "
                        f"intertwiner, got {result.verdict}"
                    )
                entries.append(
                    PairCatalogEntry(
                        spec_a=specs[i],
                        spec_b=recolored,
                        canonical_b=specs[j],
                        result=result,
                        group_order=groups[i].order,
                        two_transitive=groups[i].is_two_transitive(),
                    )
                )
                break
    entries.sort(key=lambda e: (e.spec_a.edges, e.canonical_b.edges))
    return PairCatalog(tuple(entries))


# ---------------------------------------------------------------------------
# Gassmann pairs inside one group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GassmannSearchResult:
    triples: tuple
    complete: bool


def gassmann_pairs_from_group(
    g: PermutationGroup,
    index_n: int,
    budget: int = DEFAULT_SUBGROUP_BUDGET,
) -> GassmannSearchResult:
    """Almost-conjugate, non-conjugate subgroup pairs of the given index.

    Candidate subgroups are the closures of single elements and of
    element pairs whose orders allow the target subgroup order; this
    finds every 1- or 2-generated subgroup.  ``complete`` is False when
    the budget truncates the sweep (subgroups needing 3+ generators are
    never claimed either way; all groups this package sweeps in anger
    have 2-generated subgroups at the orders involved).  Results are
    reported once per unordered pair of subgroup conjugacy classes.
    """
    if g.order % index_n != 0:
        raise ValueError(f"index {index_n} does not divide group order {g.order}")
    target = g.order // index_n

    found: dict[frozenset, Subgroup] = {}

    def record(elements):
        key = frozenset(p.images for p in elements)
        if key not in found:
            found[key] = Subgroup(g, sorted(elements))

    orders = {p: p.order() for p in g.elements}
    usable = [p for p in g.elements if target % orders[p] == 0]

    spent = 0
    complete = True
    if target == 1:
        record([g.identity()])
    else:
        for idx_a in range(len(usable)):
            if not complete:
                break
            a = usable[idx_a]
            for idx_b in range(idx_a, len(usable)):
                b = usable[idx_b]
                if target % math.lcm(orders[a], orders[b]) != 0:
                    continue
                spent += 1
                if spent > budget:
                    complete = False
                    break
                try:
                    sub = PermutationGroup.closure([a, b], cap=target)
                except GroupTooLargeError:
                    continue
                if sub.order == target:
                    record(sub.elements)

    # partition into conjugacy classes of subgroups
    reps = []
    visited = set()
    for key in sorted(found, key=lambda k: sorted(k)):
        if key in visited:
            continue
        sub = found[key]
        orbit = set()
        base = [p.images for p in sub.elements]
        for x in g.elements:
            xi = x.images
            xinv = x.inverse().images
            conj = frozenset(
                tuple(xi[t[xinv[p]]] for p in range(g.degree)) for t in base
            )
            orbit.add(conj)
        visited |= orbit
        reps.append(sub)

    triples = []
    for p in range(len(reps)):
        for q in range(p + 1, len(reps)):
            triple = almost_conjugate(g, reps[p], reps[q])
            if triple.is_gassmann_pair:
                triples.append(triple)
    return GassmannSearchResult(tuple(triples), complete)
