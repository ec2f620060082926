from fractions import Fraction

import pytest

from lgf import (
    Lattice,
    ResourceError,
    ValidationError,
    count_excursions,
    count_excursions_analytic,
    lgf_series_wallis,
    series_from_counts,
    wallis_moment,
)


def test_wallis_moments():
    assert wallis_moment(0) == 1
    assert wallis_moment(1) == Fraction(1, 2)
    assert wallis_moment(2) == Fraction(3, 8)
    assert wallis_moment(3) == Fraction(5, 16)
    with pytest.raises(ValidationError):
        wallis_moment(-1)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_analytic_matches_direct_counts(d):
    direct = count_excursions(Lattice(d), 10)
    assert [count_excursions_analytic(d, n) for n in range(11)] == direct


def test_odd_layers_vanish():
    assert count_excursions_analytic(3, 7) > 0  # odd n is fine for fcc
    assert count_excursions_analytic(2, 3) == 0  # but not in 2 dimensions


def test_series_wallis_equals_probability_series():
    lattice = Lattice(3)
    series = lgf_series_wallis(lattice, 8)
    want = series_from_counts(count_excursions(lattice, 8), 12)
    assert series == want


def test_term_limit_guard():
    with pytest.raises(ResourceError):
        lgf_series_wallis(Lattice(5), 200, term_limit=1000)
