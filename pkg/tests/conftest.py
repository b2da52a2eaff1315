import pytest

from iplkit.theories import Oracle


@pytest.fixture(scope="session")
def oracle():
    # one shared oracle; its proof-search memo warms up across tests
    return Oracle()
