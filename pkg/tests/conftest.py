import pytest

from filmcasimir import Material


@pytest.fixture(scope="session")
def gold():
    return Material(name="gold", omega_p=1.37e16, gamma_ref=5.3e13)


@pytest.fixture(scope="session")
def lossless():
    # plasma-like material with no relaxation at any T
    return Material(name="lossless", omega_p=1.37e16, gamma_ref=0.0)
