"""Dirichlet spectra of polygonal domains by finite differences.

The polygon is rasterized onto a uniform grid (exactly, when its
vertices and the spacing are rational), the 5-point Laplacian is
assembled over the strictly interior nodes, and the lowest eigenvalues
come from a symmetric sparse eigensolver with an explicit residual
contract.  Numerical agreement of two spectra at a fixed spacing is
evidence of isospectrality, not a proof; the exact certificate lives in
the transplant module.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from isodrum.geometry import is_exact, polygon_signed_area

DEFAULT_MAX_NODES = 2_000_000
DENSE_FALLBACK_LIMIT = 2000
RESIDUAL_BOUND = 1e-8
SOLVER_TOLERANCE = 1e-10
FLOAT_BOUNDARY_SLACK = 1e-12


class GridTooLargeError(RuntimeError):
    pass


class SolverConvergenceError(RuntimeError):
    pass


class GridMask:
    """Interior-node mask of a polygon on a uniform lattice.

    Node (row i, column j) sits at origin + (j*h, i*h).  ``inside`` is a
    boolean array over the bounding-box lattice; nodes on the polygon
    boundary are excluded (Dirichlet data vanishes there anyway).
    """

    def __init__(self, h, origin, inside: np.ndarray):
        self.h = h
        self.origin = origin
        self.inside = inside

    @property
    def interior_count(self) -> int:
        return int(self.inside.sum())

    @property
    def shape(self):
        return self.inside.shape

    def without_nodes(self, nodes) -> "GridMask":
        """Copy with the given (row, col) nodes forced outside."""
        trimmed = self.inside.copy()
        for i, j in nodes:
            trimmed[i, j] = False
        return GridMask(self.h, self.origin, trimmed)


def _ceil_div(num, den):
    return -((-num) // den)


def rasterize(polygon, h, max_nodes: int = DEFAULT_MAX_NODES) -> GridMask:
    """Mark every lattice node strictly inside the polygon.

    Rational vertices and spacing make the classification exact: each
    grid row is scanned once, edge crossings with the row line are
    computed as Fractions, and nodes on any edge are excluded before the
    crossing-parity rule decides the rest.  Float polygons run the same
    sweep in floating point with a tiny on-boundary slack.
    """
    if len(polygon) < 3:
        raise ValueError("degenerate polygon")
    if polygon_signed_area(polygon) == 0:
        raise ValueError("degenerate polygon (zero area)")
    exact = is_exact(polygon) and isinstance(h, (Fraction, int))
    if exact:
        h = Fraction(h)
        pts = [(Fraction(x), Fraction(y)) for x, y in polygon]
    else:
        h = float(h)
        pts = [(float(x), float(y)) for x, y in polygon]
    if h <= 0:
        raise ValueError("spacing must be positive")

    xmin = min(p[0] for p in pts)
    xmax = max(p[0] for p in pts)
    ymin = min(p[1] for p in pts)
    ymax = max(p[1] for p in pts)
    if exact:
        cols = int((xmax - xmin) / h) + 1
        rows = int((ymax - ymin) / h) + 1
    else:
        cols = int(np.floor((xmax - xmin) / h)) + 1
        rows = int(np.floor((ymax - ymin) / h)) + 1
    if rows * cols > max_nodes:
        raise GridTooLargeError(
            f"grid would hold {rows * cols} nodes, cap is {max_nodes}"
        )

    edges = [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    xs = [xmin + j * h for j in range(cols)]
    inside = np.zeros((rows, cols), dtype=bool)
    slack = 0 if exact else FLOAT_BOUNDARY_SLACK * max(xmax - xmin, ymax - ymin, 1.0)

    for i in range(rows):
        y = ymin + i * h
        crossings = []
        boundary_xs = []
        intervals = []
        for (x1, y1), (x2, y2) in edges:
            if y1 == y2:
                # horizontal edge: with zero slack this is exact equality
                if abs(y1 - y) <= slack:
                    intervals.append((min(x1, x2), max(x1, x2)))
                continue
            if y1 == y:
                boundary_xs.append(x1)
            if y2 == y:
                boundary_xs.append(x2)
            if (y1 > y) != (y2 > y):
                x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                crossings.append(x_cross)
                boundary_xs.append(x_cross)
        crossings.sort()
        boundary_xs.sort()
        row = inside[i]
        for j, x in enumerate(xs):
            k = bisect_right(boundary_xs, x + slack)
            if k > 0 and boundary_xs[k - 1] >= x - slack:
                continue
            if any(lo - slack <= x <= hi + slack for lo, hi in intervals):
                continue
            if (len(crossings) - bisect_right(crossings, x)) % 2 == 1:
                row[j] = True
    return GridMask(h, (xmin, ymin), inside)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple
    h: object
    k: int

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", vals)
        if list(vals) != sorted(vals):
            raise ValueError("eigenvalues must be ascending")
        if any(v <= 0 for v in vals):
            raise ValueError("Dirichlet eigenvalues must be positive")


def assemble_laplacian(mask: GridMask) -> sparse.csr_matrix:
    """5-point Laplacian over the interior nodes, row-major ordering.

    Diagonal 4/h^2; -1/h^2 for each interior neighbor.  Neighbors
    outside the mask contribute nothing: that is the zero Dirichlet
    condition.
    """
    inside = mask.inside
    rows, cols = inside.shape
    index = -np.ones((rows, cols), dtype=np.int64)
    order = np.flatnonzero(inside.ravel())
    index.ravel()[order] = np.arange(order.size)
    n = order.size
    if n == 0:
        raise ValueError("empty mask")
    h2 = float(mask.h) ** 2
    diag = 4.0 / h2
    off = -1.0 / h2
    data = []
    ii = []
    jj = []
    for i in range(rows):
        for j in range(cols):
            a = index[i, j]
            if a < 0:
                continue
            ii.append(a)
            jj.append(a)
            data.append(diag)
            for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                ni, nj = i + di, j + dj
                if 0 <= ni < rows and 0 <= nj < cols and index[ni, nj] >= 0:
                    ii.append(a)
                    jj.append(index[ni, nj])
                    data.append(off)
    return sparse.csr_matrix((data, (ii, jj)), shape=(n, n))


def dirichlet_eigenvalues(mask: GridMask, k: int = 6) -> Spectrum:
    """Lowest k Dirichlet eigenvalues of the discrete Laplacian.

    Dense symmetric solve below DENSE_FALLBACK_LIMIT unknowns, else
    shift-invert Lanczos started from a constant vector (deterministic).
    Every reported pair must satisfy the residual contract
    ||A v - lambda v|| / lambda <= 1e-8, otherwise
    SolverConvergenceError is raised rather than truncating.
    """
    a = assemble_laplacian(mask)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n} interior nodes, got k={k}")
    if n < DENSE_FALLBACK_LIMIT:
        values, vectors = eigh(a.toarray(), subset_by_index=(0, k - 1))
    else:
        v0 = np.full(n, 1.0 / np.sqrt(n))
        try:
            values, vectors = eigsh(
                a, k=k, sigma=0, which="LM", v0=v0, tol=SOLVER_TOLERANCE
            )
        except Exception as err:  # ARPACK non-convergence and friends
            raise SolverConvergenceError(f"eigensolver failed: {err}") from err
        order = np.argsort(values)
        values = values[order]
        vectors = vectors[:, order]
    for idx in range(k):
        lam = values[idx]
        if lam <= 0:
            raise SolverConvergenceError(
                f"nonpositive eigenvalue {lam} reported at index {idx}"
            )
        residual = np.linalg.norm(a @ vectors[:, idx] - lam * vectors[:, idx])
        if residual / lam > RESIDUAL_BOUND:
            raise SolverConvergenceError(
                f"residual {residual / lam:.3e} exceeds bound at index {idx}"
            )
    return Spectrum(tuple(float(v) for v in values[:k]), mask.h, k)


@dataclass(frozen=True)
class SpectrumComparison:
    rel_diffs: tuple
    max_rel_diff: float
    rel_tol: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "relDiffs": list(self.rel_diffs),
            "maxRelDiff": self.max_rel_diff,
            "relTol": self.rel_tol,
            "passed": self.passed,
        }


def compare_spectra(a: Spectrum, b: Spectrum, rel_tol: float = 1e-2) -> SpectrumComparison:
    """Per-index relative differences |a_i - b_i| / a_i against a tolerance."""
    if a.k != b.k:
        raise ValueError(f"eigenvalue count mismatch: {a.k} vs {b.k}")
    if float(a.h) != float(b.h):
        raise ValueError(f"grid spacing mismatch: {a.h} vs {b.h}")
    diffs = tuple(
        abs(x - y) / x for x, y in zip(a.eigenvalues, b.eigenvalues)
    )
    worst = max(diffs)
    return SpectrumComparison(diffs, worst, rel_tol, worst <= rel_tol)


@dataclass(frozen=True)
class RefinementStudy:
    spectra: tuple
    extrapolated: tuple
    observed_orders: tuple


def refinement_study(polygon, hs, k: int = 6,
                     max_nodes: int = DEFAULT_MAX_NODES) -> RefinementStudy:
    """Spectra across a descending spacing schedule.

    Richardson extrapolation from the two finest grids assumes the
    O(h^2) error of the 5-point stencil.  Observed orders compare
    successive eigenvalue increments for each index (needs >= 3 grids).
    """
    hs = list(hs)
    if any(float(h1) <= float(h2) for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("spacings must be strictly descending")
    spectra = tuple(
        dirichlet_eigenvalues(rasterize(polygon, h, max_nodes=max_nodes), k)
        for h in hs
    )
    extrapolated = ()
    if len(spectra) >= 2:
        coarse, fine = spectra[-2], spectra[-1]
        ratio = (float(hs[-2]) / float(hs[-1])) ** 2
        extrapolated = tuple(
            f + (f - c) / (ratio - 1)
            for c, f in zip(coarse.eigenvalues, fine.eigenvalues)
        )
    orders = []
    if len(spectra) >= 3:
        for idx in range(k):
            seq = [s.eigenvalues[idx] for s in spectra[-3:]]
            d1 = abs(seq[1] - seq[0])
            d2 = abs(seq[2] - seq[1])
            step = np.log(float(hs[-3]) / float(hs[-2]))
            if d2 == 0:
                orders.append(float("inf"))
            else:
                orders.append(float(np.log(d1 / d2) / step))
    return RefinementStudy(spectra, extrapolated, tuple(orders))


def unit_square_closed_form(h: Fraction, k: int) -> list[float]:
    """Discrete Dirichlet eigenvalues of the unit square at spacing h=1/m:
    (2/h^2)(2 - cos(pi p h) - cos(pi q h)) for 1 <= p, q <= m-1."""
    m = int(round(1 / float(h)))
    vals = []
    hf = 1.0 / m
    for p in range(1, m):
        for q in range(1, m):
            vals.append(
                (2.0 / hf**2) * (2.0 - np.cos(np.pi * p * hf) - np.cos(np.pi * q * hf))
            )
    vals.sort()
    return vals[:k]
