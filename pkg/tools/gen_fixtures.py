#!/usr/bin/env python3
"""Regenerate the packaged data fixtures.

Run from the repository root:

    python3 tools/gen_fixtures.py

Writes generator files for the named groups and the tiling pair used by
the test suite into src/isodrum/data/, printing every verification it
performs.  Everything here is deterministic; rerunning reproduces the
same bytes except for the dating line in each header.
"""

from __future__ import annotations

import datetime
import itertools
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from isodrum.geometry import polygons_congruent
from isodrum.permgroup import (
    Permutation,
    PermutationGroup,
    Subgroup,
    almost_conjugate,
    compose,
    permutation_character_equal,
    write_generator_file,
)
from isodrum.search import build_pair_catalog, enumerate_tree_tilings
from isodrum.spectral import compare_spectra, dirichlet_eigenvalues, rasterize
from isodrum.tiling import write_tiling_file
from isodrum.transplant import Verdict, classify_pair
from isodrum.unfold import BaseTile, unfold_domain

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "isodrum" / "data"
TODAY = datetime.date.today().isoformat()


def check(label, condition):
    print(f"  {'ok' if condition else 'FAIL'}: {label}")
    if not condition:
        raise SystemExit(f"fixture verification failed: {label}")


# ---------------------------------------------------------------------------
# The order-168 group of the Fano plane, acting on points and on lines
# ---------------------------------------------------------------------------


def fano_actions():
    """Two degree-7 actions of GL(3, 2) sharing abstract generators.

    The group is generated inside GL(3, 2) by the companion matrix of
    x^3 + x + 1 (order 7) and the transvection adding the second basis
    vector to the first (order 2).  Nonzero vectors of F_2^3 are ordered
    by their value as 3-bit integers; lines (2-dimensional subspaces,
    the lines of the Fano plane) by their sorted point triples.
    """
    companion = ((0, 0, 1), (1, 0, 1), (0, 1, 0))
    transvection = ((1, 1, 0), (0, 1, 0), (0, 0, 1))

    def apply(matrix, vec):
        return tuple(
            (matrix[k][0] * vec[0] + matrix[k][1] * vec[1] + matrix[k][2] * vec[2]) % 2
            for k in range(3)
        )

    vectors = [((v >> 2) & 1, (v >> 1) & 1, v & 1) for v in range(1, 8)]
    v_index = {v: k for k, v in enumerate(vectors)}

    def point_perm(matrix):
        return Permutation([v_index[apply(matrix, v)] for v in vectors])

    lines = sorted(
        tuple(sorted((v_index[u], v_index[v],
                      v_index[tuple((a + b) % 2 for a, b in zip(u, v))])))
        for u, v in itertools.combinations(vectors, 2)
    )
    lines = sorted(set(lines))
    l_index = {line: k for k, line in enumerate(lines)}

    def line_perm(matrix):
        images = []
        for line in lines:
            moved = tuple(sorted(
                v_index[apply(matrix, vectors[p])] for p in line
            ))
            images.append(l_index[moved])
        return Permutation(images)

    point_gens = [point_perm(companion), point_perm(transvection)]
    line_gens = [line_perm(companion), line_perm(transvection)]
    return point_gens, line_gens, len(lines)


def generate_fano():
    print("Fano group (GL(3,2) on points and lines):")
    point_gens, line_gens, line_count = fano_actions()
    check("seven lines", line_count == 7)

    g_points = PermutationGroup.closure(point_gens)
    g_lines = PermutationGroup.closure(line_gens)
    check("point action has order 168", g_points.order == 168)
    check("line action has order 168", g_lines.order == 168)
    check("point action 2-transitive", g_points.is_two_transitive())
    check("line action 2-transitive", g_lines.is_two_transitive())

    stab_point = g_points.point_stabilizer(0)
    check("point stabilizer has order 24", stab_point.order == 24)

    check(
        "point and line permutation characters agree",
        permutation_character_equal(g_points, point_gens, line_gens),
    )

    # realize the line stabilizer inside the point action: elements whose
    # line image fixes line 0, keyed by the shared abstract generators
    word_map = {}
    queue = [(g_points.identity(), g_lines.identity())]
    word_map[queue[0][0].images] = queue[0][1]
    i = 0
    while i < len(queue):
        ep, el = queue[i]
        i += 1
        for gp, gl in zip(point_gens, line_gens):
            np_, nl = compose(ep, gp), compose(el, gl)
            if np_.images not in word_map:
                word_map[np_.images] = nl
                queue.append((np_, nl))
    line_stab_elements = [
        p for p in g_points.elements if word_map[p.images].images[0] == 0
    ]
    line_stab = Subgroup(g_points, line_stab_elements)
    check("line stabilizer has order 24", line_stab.order == 24)
    triple = almost_conjugate(g_points, stab_point, line_stab)
    check("stabilizers almost conjugate", triple.almost_conjugate)
    check("stabilizers not conjugate", not triple.conjugate)

    write_generator_file(
        DATA_DIR / "fano_points.perms",
        point_gens,
        header=(
            f"GL(3,2) acting on the 7 nonzero vectors of F_2^3 ({TODAY})\n"
            "generators: companion matrix of x^3+x+1, transvection e1 -> e1+e2\n"
            "vectors ordered by 3-bit value; verified: order 168, 2-transitive,\n"
            "point stabilizer order 24\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )
    write_generator_file(
        DATA_DIR / "fano_lines.perms",
        line_gens,
        header=(
            f"GL(3,2) acting on the 7 lines of the Fano plane ({TODAY})\n"
            "same abstract generators as fano_points.perms; lines ordered by\n"
            "sorted point triple; verified: order 168, 2-transitive, equal\n"
            "permutation character to the point action, line stabilizer\n"
            "almost conjugate but not conjugate to the point stabilizer\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )
    return g_points


# ---------------------------------------------------------------------------
# Mathieu groups
# ---------------------------------------------------------------------------


def generate_mathieu():
    print("Mathieu groups:")
    a11 = Permutation.from_cycles(11, [tuple(range(11))])
    b11 = Permutation.from_cycles(11, [(2, 6, 10, 7), (3, 9, 4, 5)])
    m11 = PermutationGroup.closure([a11, b11], cap=10_000)
    check("M_11 on 11 points has order 7920", m11.order == 7920)
    check("M_11 on 11 points 2-transitive", m11.is_two_transitive())
    check("max fixed points of nonidentity element is 3",
          m11.max_nonidentity_fixed_points() == 3)
    write_generator_file(
        DATA_DIR / "m11_deg11.perms",
        [a11, b11],
        header=(
            f"Mathieu group M_11 in its degree-11 action ({TODAY})\n"
            "generators: the 11-cycle (0..10) and (2 6 10 7)(3 9 4 5)\n"
            "verified: order 7920, 2-transitive, nonidentity elements fix\n"
            "at most 3 points\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )

    a12 = Permutation.from_cycles(12, [tuple(range(11))])
    b12 = Permutation.from_cycles(12, [(2, 6, 10, 7), (3, 9, 4, 5)])
    c12 = Permutation.from_cycles(
        12, [(0, 11), (1, 10), (2, 5), (3, 7), (4, 8), (6, 9)]
    )
    m12 = PermutationGroup.closure([a12, b12, c12], cap=100_000)
    check("M_12 has order 95040", m12.order == 95040)
    check("M_12 2-transitive", m12.is_two_transitive())
    check("max fixed points in M_12 is 4", m12.max_nonidentity_fixed_points() == 4)
    write_generator_file(
        DATA_DIR / "m12_deg12.perms",
        [a12, b12, c12],
        header=(
            f"Mathieu group M_12 in its degree-12 action ({TODAY})\n"
            "generators: the degree-11 generators of M_11 extended by a fixed\n"
            "point, plus (0 11)(1 10)(2 5)(3 7)(4 8)(6 9)\n"
            "verified: order 95040, 2-transitive, nonidentity elements fix\n"
            "at most 4 points\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )

    # The degree-12 action of M_11: act on the cosets of a subgroup
    # isomorphic to PSL(2,11), order 660, found deterministically as the
    # first (order-2, order-3) generator pair whose product has order 11
    # and whose closure has order 660.
    sub = None
    pair = None
    twos = [p for p in m11.elements if p.order() == 2]
    threes = [p for p in m11.elements if p.order() == 3]
    for x in twos:
        for y in threes:
            if compose(x, y).order() != 11:
                continue
            try:
                cand = PermutationGroup.closure([x, y], cap=660)
            except Exception:
                continue
            if cand.order == 660:
                sub = cand
                pair = (x, y)
                break
        if sub is not None:
            break
    check("found an order-660 subgroup of M_11", sub is not None)

    sub_images = sorted(p.images for p in sub.elements)

    def coset_key(rep):
        ri = rep.images
        return min(tuple(ri[h[k]] for k in range(11)) for h in sub_images)

    reps = [m11.identity()]
    keys = {coset_key(reps[0]): 0}
    i = 0
    while i < len(reps):
        rep = reps[i]
        i += 1
        for gen in (a11, b11):
            cand = compose(gen, rep)
            key = coset_key(cand)
            if key not in keys:
                keys[key] = len(reps)
                reps.append(cand)
    check("subgroup has 12 cosets", len(reps) == 12)

    def coset_perm(gen):
        return Permutation(
            [keys[coset_key(compose(gen, rep))] for rep in reps]
        )

    a_cosets = coset_perm(a11)
    b_cosets = coset_perm(b11)
    m11_12 = PermutationGroup.closure([a_cosets, b_cosets], cap=10_000)
    check("coset action has order 7920", m11_12.order == 7920)
    check("coset action transitive", m11_12.is_transitive())
    check("coset action 2-transitive", m11_12.is_two_transitive())
    check("max fixed points on 12 points is 4",
          m11_12.max_nonidentity_fixed_points() == 4)
    write_generator_file(
        DATA_DIR / "m11_deg12.perms",
        [a_cosets, b_cosets],
        header=(
            f"Mathieu group M_11 in its degree-12 action ({TODAY})\n"
            "built from the degree-11 generators acting on the 12 left cosets\n"
            "of an order-660 subgroup isomorphic to PSL(2,11); cosets are\n"
            "numbered in search order from the subgroup itself\n"
            "verified: order 7920, 2-transitive, nonidentity elements fix\n"
            "at most 4 points\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )


# ---------------------------------------------------------------------------
# The 7-tile pair and its control companion
# ---------------------------------------------------------------------------


def generate_pair():
    print("7-tile pair (from the exhaustive tree search at N=7, r=3):")
    specs = enumerate_tree_tilings(7, 3)
    catalog = build_pair_catalog(specs)
    check("catalog is nonempty", len(catalog) > 0)
    check("all catalog groups have order 168",
          all(e.group_order == 168 for e in catalog.entries))

    # combinatorial noncongruence allows the unfolded shapes to coincide
    # when a color swap matches a symmetry of the base tile, so pick the
    # entry whose default-tile domains differ even up to reflection
    genuine = []
    for entry in catalog.entries:
        dom_a = unfold_domain(entry.spec_a)
        dom_b = unfold_domain(entry.spec_b)
        if not polygons_congruent(dom_a.boundary, dom_b.boundary):
            genuine.append(entry)
    check("exactly one geometrically distinct pair", len(genuine) == 1)
    entry = genuine[0]

    for label, s in (("A", entry.spec_a), ("B", entry.spec_b)):
        dom = unfold_domain(s)
        check(f"pair {label} embeds", dom.embedded)
        check(f"pair {label} area 7/2", dom.area() == Fraction(7, 2))
    result = classify_pair(entry.spec_a, entry.spec_b)
    check("pair classifies TransplantableNoncongruent",
          result.verdict is Verdict.TRANSPLANTABLE_NONCONGRUENT)

    control = catalog.entries[0].spec_a
    ctrl_result = classify_pair(entry.spec_a, control)
    check("control spec not transplantable to pair A",
          ctrl_result.verdict is Verdict.NOT_TRANSPLANTABLE)
    check("control verdict is certified", ctrl_result.certified)
    ctrl_dom = unfold_domain(control)
    check("control embeds", ctrl_dom.embedded)
    check("control area 7/2", ctrl_dom.area() == Fraction(7, 2))

    # numerical sanity at the tile used by the isospectrality evidence
    # tests: a scalene triangle so the two discretization errors are
    # independent (with the default tile every gluing reflection maps the
    # grid to itself and the discrete spectra agree to machine precision)
    tile = BaseTile(((0, 0), (1, 0), (Fraction(1, 8), 1)))
    diffs = {}
    for h in (Fraction(1, 32), Fraction(1, 64)):
        spectra = []
        for s in (entry.spec_a, entry.spec_b, control):
            dom = unfold_domain(s, base=tile)
            spectra.append(dirichlet_eigenvalues(rasterize(dom.boundary, h), k=6))
        diffs[h] = compare_spectra(spectra[0], spectra[1]).max_rel_diff
        lam2_gap = abs(spectra[0].eigenvalues[1] - spectra[2].eigenvalues[1]) / \
            spectra[2].eigenvalues[1]
    print(f"  pair max rel diff: 1/32 -> {diffs[Fraction(1,32)]:.3e}, "
          f"1/64 -> {diffs[Fraction(1,64)]:.3e}")
    print(f"  control second-eigenvalue gap at 1/64: {lam2_gap:.3e}")
    check("pair diff at 1/64 within 1e-2", diffs[Fraction(1, 64)] <= 1e-2)
    check("pair diff shrinks under refinement",
          diffs[Fraction(1, 64)] < diffs[Fraction(1, 32)])
    check("control gap exceeds 5e-2", lam2_gap > 5e-2)

    write_tiling_file(
        DATA_DIR / "pair_a.til",
        entry.spec_a,
        header=(
            f"7-tile tree tiling, first half of the isospectral pair ({TODAY})\n"
            "found by exhaustive search over tree tilings at N=7, r=3; the\n"
            "unique catalog entry whose unfolded domains are noncongruent\n"
            "even allowing reflections\n"
            "operator group order 168, 2-transitive; verified transplantable\n"
            "to pair_b.til with an exact rational witness\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )
    write_tiling_file(
        DATA_DIR / "pair_b.til",
        entry.spec_b,
        header=(
            f"7-tile tree tiling, second half of the isospectral pair ({TODAY})\n"
            "a color swap of pair_a.til that is not realizable by any tile\n"
            "relabeling; see pair_a.til\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )
    write_tiling_file(
        DATA_DIR / "control.til",
        control,
        header=(
            f"7-tile tree tiling, control for spectral comparisons ({TODAY})\n"
            "equal tile count (hence equal area) but not transplantable to\n"
            "pair_a.til; its spectrum separates clearly from the pair's\n"
            "regenerate with tools/gen_fixtures.py"
        ),
    )


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    generate_fano()
    generate_mathieu()
    generate_pair()
    print("all fixtures written to", DATA_DIR)


if __name__ == "__main__":
    main()
