"""Exact finite permutation group engine.

Everything here is small-scale and exact: groups are materialized as
explicit element lists (breadth-first closure order), and all questions
(conjugacy, stabilizers, almost-conjugacy, permutation characters) are
answered by direct enumeration.  The intended scale is groups of order
up to about 10^5; a hard element cap guards against runaway closures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_ELEMENT_CAP = 10**6


class GroupTooLargeError(RuntimeError):
    """Raised when a closure would exceed the element materialization cap."""


class NotHomomorphicError(ValueError):
    """Raised when generator images do not extend to a group homomorphism."""


class Permutation:
    """A permutation of {0..degree-1}, stored in one-line image notation.

    ``images[i]`` is the image of point ``i``.  Instances are immutable
    and totally ordered by their image tuples, which gives every
    enumeration in this package a deterministic order.
    """

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        """Build a permutation from disjoint cycles on 0-based points."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + type(cycle)([cycle[0]])):
                if a in seen:
                    raise ValueError(f"point {a} appears in two cycles")
                seen.add(a)
                images[a] = b
        return cls(images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def is_involution(self) -> bool:
        """True for self-inverse permutations, the identity included."""
        return all(self.images[v] == i for i, v in enumerate(self.images))

    def fixed_point_count(self) -> int:
        return sum(1 for i, v in enumerate(self.images) if v == i)

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.images) if v == i)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its minimum."""
        out = []
        seen = [False] * len(self.images)
        for i in range(len(self.images)):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        import math

        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return f"Permutation(identity, degree={self.degree})"
        text = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        return f"Permutation({text}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The permutation applying ``q`` first and then ``p``."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    qi = q.images
    pi = p.images
    return Permutation(pi[qi[i]] for i in range(len(pi)))


class PermutationGroup:
    """A finite permutation group with a materialized element list.

    Construct with :meth:`closure`; the element list is the breadth-first
    closure order starting from the identity, multiplying each discovered
    element on the right by the generators in list order.  Two runs over
    the same generator list produce identical element orderings.
    """

    def __init__(self, generators: Sequence[Permutation], elements: Sequence[Permutation]):
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.degree = self.generators[0].degree
        self.order = len(self.elements)
        self._element_set = frozenset(p.images for p in self.elements)
        self._classes: ConjugacyClassTable | None = None

    @classmethod
    def closure(
        cls,
        generators: Sequence[Permutation],
        cap: int = DEFAULT_ELEMENT_CAP,
    ) -> "PermutationGroup":
        """Materialize the group generated by ``generators``.

        Raises GroupTooLargeError as soon as more than ``cap`` elements
        have been discovered.
        """
        if not generators:
            raise ValueError("at least one generator required")
        degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"degree mismatch: {g.degree} vs {degree}")
        gen_tuples = [g.images for g in generators]
        ident = tuple(range(degree))
        order_list = [ident]
        seen = {ident}
        i = 0
        rng = range(degree)
        while i < len(order_list):
            cur = order_list[i]
            i += 1
            for g in gen_tuples:
                new = tuple(cur[g[k]] for k in rng)
                if new not in seen:
                    seen.add(new)
                    order_list.append(new)
                    if len(order_list) > cap:
                        raise GroupTooLargeError(
                            f"group exceeds element cap {cap}; refusing to materialize"
                        )
        return cls(generators, [Permutation(t) for t in order_list])

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, order={self.order})"

    def identity(self) -> Permutation:
        return self.elements[0]

    def orbit(self, point: int) -> tuple[int, ...]:
        """Orbit of a point under the generators, in discovery order."""
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range for degree {self.degree}")
        out = [point]
        seen = {point}
        i = 0
        while i < len(out):
            x = out[i]
            i += 1
            for g in self.generators:
                y = g.images[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return tuple(out)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def is_two_transitive(self) -> bool:
        """Transitivity on ordered pairs of distinct points.

        Computed as the orbit of one ordered pair under the generators,
        so the element list is not needed.
        """
        n = self.degree
        if n < 2:
            raise ValueError("2-transitivity needs degree >= 2")
        start = (0, 1)
        seen = {start}
        queue = [start]
        i = 0
        while i < len(queue):
            x, y = queue[i]
            i += 1
            for g in self.generators:
                pair = (g.images[x], g.images[y])
                if pair not in seen:
                    seen.add(pair)
                    queue.append(pair)
        return len(seen) == n * (n - 1)

    def point_stabilizer(self, point: int) -> "Subgroup":
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} out of range for degree {self.degree}")
        return Subgroup(self, [p for p in self.elements if p.images[point] == point])

    def max_nonidentity_fixed_points(self) -> int:
        """Largest fixed-point count over the non-identity elements."""
        if self.order == 1:
            raise ValueError("trivial group has no nonidentity element")
        return max(p.fixed_point_count() for p in self.elements if not p.is_identity())

    def conjugacy_classes(self) -> "ConjugacyClassTable":
        """Partition the elements into conjugacy classes.

        Each class is the conjugation orbit of its first-discovered
        element (in closure order); the table is cached.
        """
        if self._classes is not None:
            return self._classes
        gen_pairs = [(g.images, g.inverse().images) for g in self.generators]
        rng = range(self.degree)
        class_of: dict[tuple[int, ...], int] = {}
        classes: list[tuple[Permutation, int]] = []
        for rep in self.elements:
            t = rep.images
            if t in class_of:
                continue
            cid = len(classes)
            orbit = [t]
            class_of[t] = cid
            i = 0
            while i < len(orbit):
                x = orbit[i]
                i += 1
                for g, ginv in gen_pairs:
                    # g x g^{-1} in image notation
                    y = tuple(g[x[ginv[k]]] for k in rng)
                    if y not in class_of:
                        class_of[y] = cid
                        orbit.append(y)
            classes.append((rep, len(orbit)))
        self._classes = ConjugacyClassTable(
            classes=tuple(classes),
            class_index={Permutation(t): cid for t, cid in class_of.items()},
        )
        return self._classes


@dataclass(frozen=True)
class ConjugacyClassTable:
    """Conjugacy classes as (representative, size) pairs plus a lookup map."""

    classes: tuple[tuple[Permutation, int], ...]
    class_index: dict[Permutation, int]

    def __post_init__(self):
        assert sum(size for _, size in self.classes) == len(self.class_index)

    def class_of(self, p: Permutation) -> int:
        return self.class_index[p]

    def __len__(self) -> int:
        return len(self.classes)


class Subgroup:
    """A subgroup given by an explicit subset of a parent group's elements."""

    def __init__(self, parent: PermutationGroup, elements: Sequence[Permutation]):
        self.parent = parent
        self.elements = tuple(elements)
        self._element_set = frozenset(p.images for p in self.elements)
        for p in self.elements:
            if p.images not in parent._element_set:
                raise ValueError("subgroup element not in parent group")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def element_images(self) -> frozenset[tuple[int, ...]]:
        return self._element_set

    def is_closed(self) -> bool:
        """Verify closure under composition and inverse (debug helper)."""
        for p in self.elements:
            if p.inverse().images not in self._element_set:
                return False
        for p, q in itertools.product(self.elements, repeat=2):
            if compose(p, q).images not in self._element_set:
                return False
        return True

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"


@dataclass(frozen=True)
class GassmannTriple:
    """Almost-conjugacy evidence for a pair of subgroups.

    ``class_counts[c]`` holds ``(|h1 ∩ C_c|, |h2 ∩ C_c|)`` for each
    conjugacy class of the ambient group.  The pair is a Gassmann-Sunada
    pair when all counts agree but no group element conjugates one
    subgroup onto the other.
    """

    group: PermutationGroup
    h1: Subgroup
    h2: Subgroup
    class_counts: tuple[tuple[int, int], ...]
    almost_conjugate: bool
    conjugate: bool

    @property
    def is_gassmann_pair(self) -> bool:
        return self.almost_conjugate and not self.conjugate


def almost_conjugate(g: PermutationGroup, h1: Subgroup, h2: Subgroup) -> GassmannTriple:
    """Count each conjugacy class inside both subgroups and test conjugacy.

    Conjugacy of the subgroups is decided by exhaustive conjugation over
    all elements of ``g``, which is the simplest correct method at the
    orders this package targets.
    """
    if h1.parent is not g or h2.parent is not g:
        raise ValueError("subgroups must share the given parent group")
    if h1.order != h2.order:
        raise ValueError(f"subgroup order mismatch: {h1.order} vs {h2.order}")
    table = g.conjugacy_classes()
    counts = [[0, 0] for _ in range(len(table))]
    for p in h1:
        counts[table.class_index[p]][0] += 1
    for p in h2:
        counts[table.class_index[p]][1] += 1
    almost = all(a == b for a, b in counts)

    conjugate = False
    target = h2.element_images()
    rng = range(g.degree)
    h1_tuples = [p.images for p in h1]
    for x in g.elements:
        xi = x.images
        xinv = x.inverse().images
        if all(tuple(xi[t[xinv[k]]] for k in rng) in target for t in h1_tuples):
            conjugate = True
            break
    return GassmannTriple(
        group=g,
        h1=h1,
        h2=h2,
        class_counts=tuple((a, b) for a, b in counts),
        almost_conjugate=almost,
        conjugate=conjugate,
    )


def permutation_character_equal(
    g: PermutationGroup,
    action1: Sequence[Permutation],
    action2: Sequence[Permutation],
) -> bool:
    """Compare fixed-point counts of two actions across the whole group.

    ``action1`` and ``action2`` give, generator by generator, the images
    of ``g``'s generators in two permutation actions of equal degree.
    Both must extend to homomorphisms from ``g``; a word that collides in
    ``g`` but maps to different action images raises NotHomomorphicError.
    The comparison walks a simultaneous closure over (group element,
    action-1 image, action-2 image) triples.
    """
    if len(action1) != len(g.generators) or len(action2) != len(g.generators):
        raise ValueError("need exactly one action image per generator")
    if not action1:
        raise ValueError("empty generator list")
    m = action1[0].degree
    if any(a.degree != m for a in action1) or any(b.degree != m for b in action2):
        raise ValueError("actions must have one common degree")

    triples = list(zip([p.images for p in g.generators],
                       [a.images for a in action1],
                       [b.images for b in action2]))
    start = (tuple(range(g.degree)), tuple(range(m)), tuple(range(m)))
    images: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {
        start[0]: (start[1], start[2])
    }
    queue = [start]
    i = 0
    grng = range(g.degree)
    arng = range(m)
    while i < len(queue):
        ge, ae, be = queue[i]
        i += 1
        for gt, at, bt in triples:
            gn = tuple(ge[gt[k]] for k in grng)
            an = tuple(ae[at[k]] for k in arng)
            bn = tuple(be[bt[k]] for k in arng)
            known = images.get(gn)
            if known is None:
                images[gn] = (an, bn)
                queue.append((gn, an, bn))
            elif known != (an, bn):
                raise NotHomomorphicError(
                    "generator images do not extend to homomorphisms: "
                    "a word collision maps to distinct action images"
                )
    if len(images) != g.order:
        raise NotHomomorphicError("closure mismatch against the given group")
    for ae, be in images.values():
        if sum(1 for k in arng if ae[k] == k) != sum(1 for k in arng if be[k] == k):
            return False
    return True


def generator_map_is_isomorphism(
    gens_a: Sequence[Permutation], gens_b: Sequence[Permutation]
) -> bool:
    """True iff mapping gens_a[i] -> gens_b[i] extends to a group isomorphism.

    Decided by a simultaneous closure: the pair group must project
    bijectively onto both coordinates.
    """
    if len(gens_a) != len(gens_b) or not gens_a:
        raise ValueError("generator lists must be nonempty and equally long")
    na, nb = gens_a[0].degree, gens_b[0].degree
    pairs = list(zip([p.images for p in gens_a], [q.images for q in gens_b]))
    start = (tuple(range(na)), tuple(range(nb)))
    seen = {start}
    a_to_b: dict[tuple[int, ...], tuple[int, ...]] = {start[0]: start[1]}
    b_to_a: dict[tuple[int, ...], tuple[int, ...]] = {start[1]: start[0]}
    queue = [start]
    i = 0
    while i < len(queue):
        ae, be = queue[i]
        i += 1
        for at, bt in pairs:
            an = tuple(ae[at[k]] for k in range(na))
            bn = tuple(be[bt[k]] for k in range(nb))
            if (an, bn) in seen:
                continue
            if a_to_b.get(an, bn) != bn or b_to_a.get(bn, an) != an:
                return False
            seen.add((an, bn))
            a_to_b[an] = bn
            b_to_a[bn] = an
            queue.append((an, bn))
    return True


# ---------------------------------------------------------------------------
# Generator fixture files
#
# Text format: comments start with '#', the first data line is
# "degree N", and every following data line is one permutation in
# one-line image notation "i0 i1 ... i(N-1)".
# ---------------------------------------------------------------------------


def read_generator_file(path) -> list[Permutation]:
    perms: list[Permutation] = []
    degree = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if degree is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "degree":
                    raise ValueError(f"{path}:{lineno}: expected 'degree N'")
                degree = int(parts[1])
                if degree <= 0:
                    raise ValueError(f"{path}:{lineno}: degree must be positive")
                continue
            images = [int(tok) for tok in line.split()]
            if len(images) != degree:
                raise ValueError(
                    f"{path}:{lineno}: expected {degree} images, got {len(images)}"
                )
            perms.append(Permutation(images))
    if degree is None:
        raise ValueError(f"{path}: missing 'degree N' header")
    return perms


def write_generator_file(path, perms: Sequence[Permutation], header: str = "") -> None:
    if not perms:
        raise ValueError("nothing to write")
    degree = perms[0].degree
    lines = []
    for text in header.splitlines():
        lines.append(f"# {text}".rstrip())
    lines.append(f"degree {degree}")
    for p in perms:
        if p.degree != degree:
            raise ValueError("mixed degrees")
        lines.append(" ".join(map(str, p.images)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Affine maps over small finite fields
#
# Points of the affine space F_q^n are ordered lexicographically by their
# coordinate vectors over {0..q-1}; this fixes the permutation
# representation of every affine map uniquely.
# ---------------------------------------------------------------------------


class SmallField:
    """Arithmetic tables for GF(q), q = p^e a small prime power.

    Elements are encoded as integers 0..q-1; an element's base-p digits
    are the coefficients of its polynomial representative, so 0 and 1
    are the additive and multiplicative identities.
    """

    def __init__(self, q: int):
        p, e = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.e = e
        if e == 1:
            self.add_table = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul_table = [[(a * b) % p for b in range(p)] for a in range(p)]
            return
        modulus = _find_irreducible(p, e)
        polys = [_int_to_poly(a, p, e) for a in range(q)]
        self.add_table = [
            [_poly_to_int([(x + y) % p for x, y in zip(polys[a], polys[b])], p)
             for b in range(q)]
            for a in range(q)
        ]
        self.mul_table = [
            [_poly_to_int(_poly_mulmod(polys[a], polys[b], modulus, p), p)
             for b in range(q)]
            for a in range(q)
        ]

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


def _int_to_poly(a: int, p: int, e: int) -> list[int]:
    coeffs = []
    for _ in range(e):
        coeffs.append(a % p)
        a //= p
    return coeffs


def _poly_to_int(coeffs: Sequence[int], p: int) -> int:
    val = 0
    for c in reversed(coeffs):
        val = val * p + c
    return val


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # reduce by the monic modulus
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(e):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
    return prod[:e] + [0] * max(0, e - len(prod))


def _find_irreducible(p: int, e: int) -> list[int]:
    """First monic irreducible polynomial of degree e over F_p, by trial division."""
    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    monics = {1: [[c, 1] for c in range(p)]}
    for d in range(2, e // 2 + 1):
        monics[d] = []
        for low in itertools.product(range(p), repeat=d):
            monics[d].append(list(low) + [1])
    for low in itertools.product(range(p), repeat=e):
        cand = list(low) + [1]
        if _poly_divisible_by_smaller(cand, monics, p):
            continue
        return cand
    raise RuntimeError("no irreducible polynomial found")  # unreachable


def _poly_divisible_by_smaller(cand, monics, p) -> bool:
    e = len(cand) - 1
    for d in range(1, e // 2 + 1):
        for div in monics[d]:
            if _poly_mod(cand, div, p) is None:
                return True
    return False


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int):
    """Remainder of a by monic b; None when the remainder is zero."""
    r = list(a)
    db = len(b) - 1
    while len(r) - 1 >= db:
        c = r[-1]
        if c:
            for j in range(db + 1):
                r[len(r) - 1 - db + j] = (r[len(r) - 1 - db + j] - c * b[j]) % p
        r.pop()
        while r and r[-1] == 0 and len(r) - 1 >= db:
            r.pop()
    return None if all(c == 0 for c in r) else r


def affine_points(q: int, n: int) -> list[tuple[int, ...]]:
    """Points of F_q^n in lexicographic coordinate order."""
    return list(itertools.product(range(q), repeat=n))


def affine_map_permutation(
    field: SmallField, n: int, matrix: Sequence[Sequence[int]], shift: Sequence[int]
) -> Permutation | None:
    """The permutation x -> Mx + c on lex-ordered points, or None if not bijective."""
    q = field.q
    points = affine_points(q, n)
    index = {pt: i for i, pt in enumerate(points)}
    images = []
    hit = set()
    for pt in points:
        out = []
        for row, c in zip(matrix, shift):
            acc = c
            for a, x in zip(row, pt):
                acc = field.add(acc, field.mul(a, x))
            out.append(acc)
        j = index[tuple(out)]
        if j in hit:
            return None
        hit.add(j)
        images.append(j)
    return Permutation(images)


def all_affine_involutions(q: int, n: int) -> list[Permutation]:
    """Every nonidentity involution of the form x -> Mx + c on F_q^n.

    Enumerates all q^(n^2) matrices and q^n shifts, keeps the bijective
    maps, and filters for involutions.  Only sensible for tiny q^n.
    """
    field = SmallField(q)
    out = []
    for flat in itertools.product(range(q), repeat=n * n):
        matrix = [flat[i * n:(i + 1) * n] for i in range(n)]
        for shift in itertools.product(range(q), repeat=n):
            perm = affine_map_permutation(field, n, matrix, shift)
            if perm is not None and not perm.is_identity() and perm.is_involution():
                out.append(perm)
    return out


def affine_involution_bound_holds(
    q: int, n: int, involutions: Iterable[Permutation]
) -> bool:
    """Check Fix(f) <= q^(n-1) for each given involution on q^n points."""
    bound = q ** (n - 1)
    npoints = q**n
    for p in involutions:
        if p.degree != npoints:
            raise ValueError(f"expected degree {npoints}, got {p.degree}")
        if p.is_identity() or not p.is_involution():
            raise ValueError(f"not a nonidentity involution: {p!r}")
        if p.fixed_point_count() > bound:
            return False
    return True
