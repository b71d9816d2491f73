import pytest

from contractmatch import builtin


@pytest.fixture(scope="session")
def gs4():
    return builtin("gale-shapley-4")


@pytest.fixture(scope="session")
def illustration():
    return builtin("illustration")


@pytest.fixture(scope="session")
def modified():
    return builtin("illustration-modified")
