import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from isodrum.spectral import (
    GridTooLargeError,
    Spectrum,
    assemble_laplacian,
    compare_spectra,
    dirichlet_eigenvalues,
    rasterize,
    refinement_study,
    unit_square_closed_form,
)
from isodrum.tiling import Tiling
from isodrum.unfold import unfold_domain

F = Fraction

UNIT_SQUARE = ((F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1)))


def square_spec():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Tiling.build(2, 3, [(2, 0, 1)])


class TestRasterize:
    def test_unit_square_half(self):
        mask = rasterize(UNIT_SQUARE, F(1, 2))
        assert mask.interior_count == 1
        assert mask.inside[1, 1]

    def test_unit_square_quarter(self):
        mask = rasterize(UNIT_SQUARE, F(1, 4))
        assert mask.interior_count == 9

    def test_boundary_nodes_excluded(self):
        mask = rasterize(UNIT_SQUARE, F(1, 4))
        assert not mask.inside[0].any()
        assert not mask.inside[-1].any()
        assert not mask.inside[:, 0].any()
        assert not mask.inside[:, -1].any()

    def test_triangle_diagonal_nodes_excluded(self):
        # nodes on the hypotenuse x + y = 1 are boundary
        tri = ((F(0), F(0)), (F(1), F(0)), (F(0), F(1)))
        mask = rasterize(tri, F(1, 4))
        assert mask.interior_count == 3  # (1/4,1/4),(1/2,1/4),(1/4,1/2)

    def test_area_consistency(self):
        mask = rasterize(UNIT_SQUARE, F(1, 64))
        assert abs(mask.interior_count * (1 / 64) ** 2 - 1.0) < 0.05

    def test_grid_cap(self):
        with pytest.raises(GridTooLargeError):
            rasterize(UNIT_SQUARE, F(1, 64), max_nodes=100)

    def test_degenerate_polygon(self):
        with pytest.raises(ValueError):
            rasterize(((0, 0), (1, 0)), F(1, 4))
        with pytest.raises(ValueError):
            rasterize(((0, 0), (1, 0), (2, 0)), F(1, 4))

    def test_float_polygon_square_matches_exact(self):
        float_square = tuple((float(x), float(y)) for x, y in UNIT_SQUARE)
        exact = rasterize(UNIT_SQUARE, F(1, 8))
        approx = rasterize(float_square, 1 / 8)
        assert exact.interior_count == approx.interior_count == 49


class TestEigenvalues:
    def test_single_node_square(self):
        mask = rasterize(UNIT_SQUARE, F(1, 2))
        spec = dirichlet_eigenvalues(mask, k=1)
        assert spec.eigenvalues[0] == pytest.approx(16.0, rel=1e-12)

    def test_quarter_square_matches_closed_form(self):
        mask = rasterize(UNIT_SQUARE, F(1, 4))
        spec = dirichlet_eigenvalues(mask, k=9)
        expected = unit_square_closed_form(F(1, 4), 9)
        assert spec.eigenvalues == pytest.approx(expected, rel=1e-10)
        # the ground state of the assembled matrix, written out
        assert spec.eigenvalues[0] == pytest.approx(32 * (2 - math.sqrt(2)), rel=1e-12)

    def test_sixteenth_square_matches_closed_form(self):
        mask = rasterize(UNIT_SQUARE, F(1, 16))
        spec = dirichlet_eigenvalues(mask, k=6)
        expected = unit_square_closed_form(F(1, 16), 6)
        assert spec.eigenvalues == pytest.approx(expected, rel=1e-8)

    def test_convergence_toward_continuum(self):
        vals = []
        for m in (8, 16, 32):
            mask = rasterize(UNIT_SQUARE, F(1, m))
            vals.append(dirichlet_eigenvalues(mask, k=1).eigenvalues[0])
        target = 2 * math.pi**2
        errs = [abs(v - target) for v in vals]
        assert errs[0] > errs[1] > errs[2]
        # O(h^2): halving h quarters the error
        assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.15)

    def test_k_out_of_range(self):
        mask = rasterize(UNIT_SQUARE, F(1, 2))
        with pytest.raises(ValueError):
            dirichlet_eigenvalues(mask, k=5)

    def test_matrix_is_symmetric(self):
        mask = rasterize(UNIT_SQUARE, F(1, 8))
        a = assemble_laplacian(mask)
        assert (a != a.T).nnz == 0

    def test_domain_monotonicity(self):
        mask = rasterize(UNIT_SQUARE, F(1, 8))
        lam_full = dirichlet_eigenvalues(mask, k=1).eigenvalues[0]
        trimmed = mask.without_nodes([(4, 4), (3, 4)])
        lam_trim = dirichlet_eigenvalues(trimmed, k=1).eigenvalues[0]
        assert lam_trim >= lam_full

    def test_scaling_relation(self):
        # doubling the polygon and the spacing reproduces spectrum / 4
        big = tuple((2 * x, 2 * y) for x, y in UNIT_SQUARE)
        small_spec = dirichlet_eigenvalues(rasterize(UNIT_SQUARE, F(1, 8)), k=4)
        big_spec = dirichlet_eigenvalues(rasterize(big, F(1, 4)), k=4)
        for a, b in zip(small_spec.eigenvalues, big_spec.eigenvalues):
            assert b == pytest.approx(a / 4, rel=1e-10)

    def test_spectrum_invariants(self):
        with pytest.raises(ValueError):
            Spectrum((3.0, 2.0), F(1, 4), 2)
        with pytest.raises(ValueError):
            Spectrum((-1.0, 2.0), F(1, 4), 2)

    def test_sparse_path_used_above_dense_limit(self):
        # h = 1/64 gives 3969 unknowns, above the dense fallback limit
        mask = rasterize(UNIT_SQUARE, F(1, 64))
        assert mask.interior_count == 63 * 63
        spec = dirichlet_eigenvalues(mask, k=3)
        expected = unit_square_closed_form(F(1, 64), 3)
        assert spec.eigenvalues == pytest.approx(expected, rel=1e-8)


class TestCompare:
    def test_identical_pass(self):
        mask = rasterize(UNIT_SQUARE, F(1, 8))
        s = dirichlet_eigenvalues(mask, k=4)
        report = compare_spectra(s, s, rel_tol=1e-15)
        assert report.passed
        assert report.max_rel_diff == 0

    def test_square_vs_thin_rectangle_fails(self):
        # same area 1, very different ground state
        rect = ((F(0), F(0)), (F(2), F(0)), (F(2), F(1, 2)), (F(0), F(1, 2)))
        h = F(1, 16)
        s1 = dirichlet_eigenvalues(rasterize(UNIT_SQUARE, h), k=3)
        s2 = dirichlet_eigenvalues(rasterize(rect, h), k=3)
        report = compare_spectra(s1, s2, rel_tol=1e-2)
        assert not report.passed
        assert report.rel_diffs[0] > 0.5

    def test_mismatched_inputs_rejected(self):
        s1 = dirichlet_eigenvalues(rasterize(UNIT_SQUARE, F(1, 8)), k=3)
        s2 = dirichlet_eigenvalues(rasterize(UNIT_SQUARE, F(1, 8)), k=2)
        with pytest.raises(ValueError):
            compare_spectra(s1, s2)
        s3 = dirichlet_eigenvalues(rasterize(UNIT_SQUARE, F(1, 4)), k=3)
        with pytest.raises(ValueError):
            compare_spectra(s1, s3)


class TestRefinement:
    def test_square_study(self):
        study = refinement_study(UNIT_SQUARE, [F(1, 8), F(1, 16), F(1, 32)], k=2)
        assert len(study.spectra) == 3
        target = 2 * math.pi**2
        lam1 = [s.eigenvalues[0] for s in study.spectra]
        assert lam1[0] < lam1[1] < lam1[2] < target
        # extrapolation lands much closer than the finest grid value
        assert abs(study.extrapolated[0] - target) < abs(lam1[2] - target) / 10
        assert study.observed_orders[0] == pytest.approx(2.0, abs=0.15)

    def test_rejects_unsorted_spacings(self):
        with pytest.raises(ValueError):
            refinement_study(UNIT_SQUARE, [F(1, 16), F(1, 8)], k=1)


class TestEndToEnd:
    def test_doubled_triangle_square_pipeline(self):
        domain = unfold_domain(square_spec())
        mask = rasterize(domain.boundary, F(1, 16))
        spec = dirichlet_eigenvalues(mask, k=4)
        expected = unit_square_closed_form(F(1, 16), 4)
        assert spec.eigenvalues == pytest.approx(expected, rel=1e-9)
