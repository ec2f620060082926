import math

import pytest

from lgf import Lattice, ValidationError, fcc_step_set
from lgf.lattice import structure_function_eval


def test_step_set_3d_is_the_twelve_fcc_vectors():
    steps = fcc_step_set(3)
    assert len(steps) == 12
    assert all(sum(abs(v) for v in s) == 2 for s in steps)
    assert all(max(abs(v) for v in s) == 1 for s in steps)
    assert (1, 1, 0) in steps and (-1, 0, 1) in steps
    assert len(set(steps)) == 12


@pytest.mark.parametrize("d,c", [(2, 4), (3, 12), (4, 24), (5, 40), (6, 60)])
def test_coordination_number(d, c):
    assert Lattice(d).coordination_number == c
    assert c == 2 * d * (d - 1)


def test_dimension_below_two_rejected():
    with pytest.raises(ValidationError):
        Lattice(1)
    with pytest.raises(ValidationError):
        fcc_step_set(0)


def test_steps_are_sorted_and_stable():
    assert list(Lattice(4).steps) == sorted(Lattice(4).steps)
    assert Lattice(3).steps == Lattice(3).steps


def test_structure_function_normalisation():
    sf = Lattice(3).structure_function()
    assert sf([0.0, 0.0, 0.0]) == pytest.approx(1.0)
    # lambda averages cos products, so it is bounded by 1 in absolute value
    assert abs(sf([0.3, 1.2, 2.5])) <= 1.0


def test_structure_function_matches_step_average():
    lattice = Lattice(3)
    sf = lattice.structure_function()
    k = [0.7, -0.4, 1.9]
    direct = sum(
        math.cos(sum(ki * si for ki, si in zip(k, step))) for step in lattice.steps
    ) / lattice.coordination_number
    assert sf(k) == pytest.approx(direct)


def test_structure_function_checks_dimension():
    sf = Lattice(3).structure_function()
    with pytest.raises(ValidationError):
        structure_function_eval(sf, [0.0, 0.0])
