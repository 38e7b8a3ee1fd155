"""isodrum: transplantable isospectral planar drums, exactly and numerically.

The package builds colored involution graphs (tilings), decides
transplantability with exact rational intertwiners, unfolds tree tilings
into planar polygons, and verifies Dirichlet isospectrality with a
finite-difference Laplacian.

Submodules and the names below load lazily on first attribute access, so
importing :mod:`isodrum` stays cheap; the numerical stack (numpy, scipy,
matplotlib) is only pulled in by the spectral and report modules.
"""

from importlib import import_module, metadata

try:
    __version__ = metadata.version("isodrum")
except metadata.PackageNotFoundError:
    __version__ = "0+unknown"

_SUBMODULES = (
    "permgroup",
    "linalg",
    "tiling",
    "transplant",
    "geometry",
    "unfold",
    "spectral",
    "search",
    "report",
    "fixtures",
    "cli",
)

_EXPORTS = {
    "Permutation": "permgroup",
    "PermutationGroup": "permgroup",
    "Subgroup": "permgroup",
    "GassmannTriple": "permgroup",
    "almost_conjugate": "permgroup",
    "permutation_character_equal": "permgroup",
    "compose": "permgroup",
    "read_generator_file": "permgroup",
    "write_generator_file": "permgroup",
    "RationalMatrix": "linalg",
    "Tiling": "tiling",
    "parse_tiling": "tiling",
    "read_tiling_file": "tiling",
    "write_tiling_file": "tiling",
    "format_tiling": "tiling",
    "side_count_bound": "tiling",
    "group_table": "tiling",
    "group_table_at": "tiling",
    "Verdict": "transplant",
    "PairClassification": "transplant",
    "classify_pair": "transplant",
    "intertwiner_space": "transplant",
    "find_invertible_intertwiner": "transplant",
    "permutation_intertwiner": "transplant",
    "verify_intertwiner": "transplant",
    "characters_equal": "transplant",
    "BaseTile": "unfold",
    "UnfoldedDomain": "unfold",
    "unfold": "unfold",
    "unfold_domain": "unfold",
    "export_svg": "unfold",
    "read_polygon_file": "unfold",
    "Spectrum": "spectral",
    "rasterize": "spectral",
    "dirichlet_eigenvalues": "spectral",
    "compare_spectra": "spectral",
    "refinement_study": "spectral",
    "enumerate_tree_tilings": "search",
    "canonical_form": "search",
    "build_pair_catalog": "search",
    "gassmann_pairs_from_group": "search",
    "known_pair": "fixtures",
    "control_spec": "fixtures",
    "fixture_digests": "fixtures",
}

__all__ = ["__version__", *_SUBMODULES, *_EXPORTS]


def __getattr__(name):
    if name in _EXPORTS:
        value = getattr(import_module(f"isodrum.{_EXPORTS[name]}"), name)
    elif name in _SUBMODULES:
        value = import_module(f"isodrum.{name}")
    else:
        raise AttributeError(f"module 'isodrum' has no attribute {name!r}")
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(__all__))
