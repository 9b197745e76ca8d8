import pytest

from tensorltc import TensorCode, hamming74, parity_code, repetition_code


@pytest.fixture(scope="session")
def parity3():
    return parity_code(3)


@pytest.fixture(scope="session")
def cube3(parity3):
    """Parity(3) base raised to the 3rd power, caches warmed."""
    code = TensorCode(parity3, 3)
    code.flattened()
    code.sub().flattened()
    return code


@pytest.fixture(scope="session")
def cube4(parity3):
    code = TensorCode(parity3, 4)
    code.flattened()
    code.sub().flattened()
    return code


@pytest.fixture(scope="session")
def hamming():
    return hamming74()


@pytest.fixture(scope="session")
def rep3():
    return repetition_code(3)
