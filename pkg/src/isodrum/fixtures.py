"""Packaged example data: named permutation groups and the 7-tile pair.

Every file under ``isodrum/data`` was produced by ``tools/gen_fixtures.py``,
which re-derives and re-verifies the stated properties before writing.
The headers inside the files carry the provenance notes.
"""

from __future__ import annotations

import hashlib
from importlib import resources

from .permgroup import Permutation, read_generator_file
from .tiling import Tiling, read_tiling_file

FIXTURE_FILES = (
    "control.til",
    "fano_lines.perms",
    "fano_points.perms",
    "m11_deg11.perms",
    "m11_deg12.perms",
    "m12_deg12.perms",
    "pair_a.til",
    "pair_b.til",
)


def _data_file(name: str):
    return resources.as_file(resources.files("isodrum") / "data" / name)


def _read_perms(name: str) -> list[Permutation]:
    with _data_file(name) as path:
        return read_generator_file(path)


def _read_tiling(name: str) -> Tiling:
    with _data_file(name) as path:
        return read_tiling_file(path)


def fano_point_generators() -> list[Permutation]:
    """Generators of the order-168 group on the 7 points of the Fano plane."""
    return _read_perms("fano_points.perms")


def fano_line_generators() -> list[Permutation]:
    """The same two abstract generators acting on the 7 Fano lines."""
    return _read_perms("fano_lines.perms")


def mathieu11_generators() -> list[Permutation]:
    """Generators of the Mathieu group M_11 in its degree-11 action."""
    return _read_perms("m11_deg11.perms")


def mathieu11_degree12_generators() -> list[Permutation]:
    """Generators of M_11 acting on the 12 cosets of a PSL(2,11) subgroup."""
    return _read_perms("m11_deg12.perms")


def mathieu12_generators() -> list[Permutation]:
    """Generators of the Mathieu group M_12 in its degree-12 action."""
    return _read_perms("m12_deg12.perms")


def known_pair() -> tuple[Tiling, Tiling]:
    """The 7-tile, 3-color transplantable pair with noncongruent unfoldings."""
    return _read_tiling("pair_a.til"), _read_tiling("pair_b.til")


def control_spec() -> Tiling:
    """A 7-tile tiling of equal area that is not transplantable to the pair."""
    return _read_tiling("control.til")


def fixture_digests() -> dict[str, str]:
    """SHA-256 of each packaged data file, keyed by file name."""
    out = {}
    for name in FIXTURE_FILES:
        with _data_file(name) as path:
            out[name] = hashlib.sha256(path.read_bytes()).hexdigest()
    return out
