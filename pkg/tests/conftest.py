import pytest

from qeta.congruence import newton_data


@pytest.fixture(scope="session")
def newton120():
    """Decompositions for i <= 10 at 120 terms; cheap enough to share across modules."""
    return newton_data(10, 120)
