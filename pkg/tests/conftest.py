import pytest

from lgf import Lattice, count_excursions


@pytest.fixture(scope="session")
def fcc4_counts_120():
    """a_n(0) for the 4D lattice to n=120; shared by the operator
    verification and guessing tests (the expensive part of the suite)."""
    return count_excursions(Lattice(4), 120)


@pytest.fixture(scope="session")
def fcc5_series_155():
    """The 5D count series to n=155 through the staged pipeline; shared
    so the long run happens once."""
    from lgf import multi_step_pipeline

    return multi_step_pipeline(Lattice(5), (2, 1, 2), 155)
