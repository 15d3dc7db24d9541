import pytest

from toroidal.action import ToroidalModule
from toroidal.affine import AffineModule
from toroidal.algebra import load_algebra


@pytest.fixture(scope="session")
def sl2():
    return load_algebra("sl2")


@pytest.fixture(scope="session")
def sl3():
    return load_algebra("sl3")


@pytest.fixture(scope="session")
def osp():
    return load_algebra("osp(1|2)")


@pytest.fixture(scope="session")
def verma(sl2):
    # level-1 Verma module with lambda(H1) = 0
    return AffineModule(sl2, (0,), 1, 0, depth=4)


@pytest.fixture(scope="session")
def tm2(verma):
    return ToroidalModule(verma, 2)


@pytest.fixture(scope="session")
def tm3(verma):
    return ToroidalModule(verma, 3)
