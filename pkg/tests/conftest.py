import pathlib

import pytest

import scskit as sk

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def rect15():
    return sk.load_cfr(DATA / "cfr_n15_r4.txt")


@pytest.fixture(scope="session")
def rect5():
    return sk.load_cfr(DATA / "cfr_n5_r4.txt")


@pytest.fixture(scope="session")
def fam_c1_15(rect15):
    return sk.phase_ramp_family(rect15)


@pytest.fixture(scope="session")
def fam_c2_15(rect15):
    return sk.interleaved_family(rect15, 7)


@pytest.fixture(scope="session")
def fam_c3_5(rect5):
    return sk.multi_null_family(rect5, {0, 2, 6, 7, 8, 10})


@pytest.fixture(scope="session")
def fam_c4_15(rect15):
    return sk.zcz_family(rect15, s0=4)
