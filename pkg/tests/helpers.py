"""Shared test utilities: random tiling spec generators."""

import random
import warnings

from isodrum.tiling import Tiling


def random_valid_tiling(rng: random.Random, max_tiles: int = 13, max_colors: int = 6) -> Tiling:
    """A random spec satisfying the per-color matching condition.

    Draws a random edge count, then picks edges uniformly among those
    that keep every color class a partial matching.  Produces a healthy
    mix of trees, connected non-trees, and disconnected graphs.
    """
    n = rng.randint(1, max_tiles)
    r = rng.randint(3, max_colors)
    target = rng.randint(0, max(0, min(n + 2, r * (n // 2))))
    edges = []
    used = set()  # (color, vertex) pairs already matched
    attempts = 0
    while len(edges) < target and attempts < 200:
        attempts += 1
        mu = rng.randint(1, r)
        i, j = rng.sample(range(n), 2) if n >= 2 else (0, 0)
        if n < 2 or (mu, i) in used or (mu, j) in used:
            continue
        edges.append((mu, min(i, j), max(i, j)))
        used.add((mu, i))
        used.add((mu, j))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Tiling.build(n, r, edges)


def random_tree_tiling(rng: random.Random, tiles: int, colors: int) -> Tiling:
    """A random tree spec: every vertex attaches to an earlier one, each
    edge taking a color unused at both endpoints.  Retries until the
    greedy coloring succeeds."""
    if tiles == 1:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return Tiling.build(1, colors, [])
    for _ in range(1000):
        edges = []
        used = set()
        ok = True
        for v in range(1, tiles):
            u = rng.randrange(v)
            free = [mu for mu in range(1, colors + 1)
                    if (mu, u) not in used and (mu, v) not in used]
            if not free:
                ok = False
                break
            mu = rng.choice(free)
            edges.append((mu, u, v))
            used.add((mu, u))
            used.add((mu, v))
        if ok:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                return Tiling.build(tiles, colors, edges)
    raise RuntimeError("could not color a random tree")
