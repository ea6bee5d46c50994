import pytest

from maxarc.census import count_8arcs
from maxarc.ff import KIND_I_MODULUS, GF2m
from maxarc.singer import SingerKind, build_singer_arc

SEED = 20240607


@pytest.fixture(scope="session")
def F7():
    return GF2m(7, KIND_I_MODULUS)


@pytest.fixture(scope="session")
def F5():
    return GF2m(5)


@pytest.fixture(scope="session")
def singer_arcs():
    return {kind: build_singer_arc(kind) for kind in SingerKind}


@pytest.fixture(scope="session")
def census7(F7):
    return count_8arcs(F7)
