import math
import os

import pytest

from lgf import Lattice, ResourceError, ValidationError, count_excursions, count_walk_table, mass_check
from lgf.walkcount import canonical_point, orbit_size


def central_binomial_squared(n: int) -> int:
    """2D closed form: a_{2k}(0) = C(2k,k)^2, odd layers empty."""
    if n % 2:
        return 0
    k = n // 2
    return math.comb(2 * k, k) ** 2


def test_2d_closed_form():
    counts = count_excursions(Lattice(2), 16)
    assert counts == [central_binomial_squared(n) for n in range(17)]


def test_3d_known_prefix():
    counts = count_excursions(Lattice(3), 6)
    assert counts[:4] == [1, 0, 12, 48]
    assert counts[4] == 540
    assert counts[5] == 4320


def test_4d_prefix_forced_by_partial_sums():
    counts = count_excursions(Lattice(4), 5)
    assert counts == [1, 0, 24, 192, 3384, 51840]


def test_canonical_point_and_orbit():
    assert canonical_point((-2, 0, 1)) == (2, 1, 0)
    assert canonical_point((0, 0)) == (0, 0)
    # (2,1,0): signs on two nonzero coords (4) * permutations 3! = 24
    assert orbit_size((2, 1, 0)) == 24
    assert orbit_size((0, 0, 0)) == 1
    assert orbit_size((1, 1)) == 4


def test_table_symmetry_folding():
    table = count_walk_table(Lattice(3), 6, radius_cut=6)
    assert table.get(4, (1, 1, 0)) == table.get(4, (0, -1, 1))
    assert table.get(4, (2, 0, 0)) == table.get(4, (0, 0, -2))
    assert table.get(3, (1, 1, 1)) > 0


def test_parity_invariant():
    table = count_walk_table(Lattice(3), 5, radius_cut=5)
    for n in range(6):
        for x, v in table.layer_items(n):
            assert sum(x) % 2 == 0
            assert v > 0


def test_mass_conservation():
    table = count_walk_table(Lattice(3), 6, radius_cut=6)
    for n in range(7):
        assert mass_check(table, n)


def test_origin_series_matches_count_excursions():
    table = count_walk_table(Lattice(4), 8, radius_cut=8)
    assert table.origin_series() == count_excursions(Lattice(4), 8)


def test_default_radius_cut_keeps_origin_exact():
    full = count_walk_table(Lattice(3), 10, radius_cut=10).origin_series()
    assert count_walk_table(Lattice(3), 10).origin_series() == full


def test_validation():
    with pytest.raises(ValidationError):
        count_excursions(Lattice(3), -1)
    with pytest.raises(ValidationError):
        count_walk_table(Lattice(3), 4, threads=0)
    table = count_walk_table(Lattice(3), 4)
    with pytest.raises(ValidationError):
        table.get(5, (0, 0, 0))
    with pytest.raises(ValidationError):
        table.get(2, (0, 0))


def test_memory_budget_honored():
    os.environ["LGF_MEM_BUDGET"] = "1000"
    try:
        with pytest.raises(ResourceError):
            count_excursions(Lattice(4), 12)
    finally:
        del os.environ["LGF_MEM_BUDGET"]
