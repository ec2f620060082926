from fractions import Fraction

import pytest

from lgf import (
    ExactSeries,
    ValidationError,
    check_excursion_series,
    dump_series,
    parse_series,
    series_from_counts,
)


def test_basic_accessors():
    s = ExactSeries([1, Fraction(1, 2), 0])
    assert len(s) == 3
    assert s.order == 2
    assert s[1] == Fraction(1, 2)
    assert s.truncate(1).coefficients == [1, Fraction(1, 2)]


def test_partial_sums():
    s = ExactSeries([1, 2, 3])
    assert s.partial_sums().coefficients == [1, 3, 6]


def test_series_from_counts():
    s = series_from_counts([1, 0, 4, 0, 36], 4)
    assert s.coefficients == [1, 0, Fraction(1, 4), 0, Fraction(36, 256)]
    check_excursion_series(s, 4)


def test_check_excursion_series_rejects_noncounts():
    bad = ExactSeries([1, Fraction(1, 3)])
    with pytest.raises(ValidationError):
        check_excursion_series(bad, 4)


def test_dump_parse_round_trip():
    s = series_from_counts([1, 0, 12, 48], 12)
    text = dump_series(s, 3, 12)
    back, header = parse_series(text)
    assert back == s
    assert header == {"d": 3, "c": 12, "N": 3}
    # byte stability
    assert dump_series(s, 3, 12) == text


def test_parse_rejects_malformed():
    with pytest.raises(ValidationError):
        parse_series("no header\n1\n2\n")
    with pytest.raises(ValidationError):
        parse_series("# lgf-seq d=3 c=12 N=5\n1\n2\n")  # wrong length
    with pytest.raises(ValidationError):
        parse_series("# lgf-seq d=3 c=12 N=1\n1\nbogus\n")
