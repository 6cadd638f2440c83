from __future__ import annotations

import pytest

from e8nine import autgroup as ag
from e8nine import blocks as bl
from e8nine import frames as fr
from e8nine import gf2
from e8nine.lattice import build_lattice
from e8nine.spreadsearch import find_spread


@pytest.fixture(scope="session")
def lat():
    return build_lattice()


@pytest.fixture(scope="session")
def ft(lat):
    return gf2.build_forms(lat)


@pytest.fixture(scope="session")
def census(lat, ft):
    return gf2.mod2_census(lat, ft)


@pytest.fixture(scope="session")
def spaces270(ft):
    return gf2.enumerate_isotropic_4spaces(ft)


@pytest.fixture(scope="session")
def labels(spaces270):
    return gf2.classify(spaces270)


@pytest.fixture(scope="session")
def members_a(labels):
    return gf2.class_members(labels, gf2.SpaceClass.CLASS_A)


@pytest.fixture(scope="session")
def spread(members_a):
    return find_spread(members_a, gf2.SpaceClass.CLASS_A)


@pytest.fixture(scope="session")
def frame_array(lat, ft, census, spread):
    return fr.build_frame_array(lat, ft, census, spread)


@pytest.fixture(scope="session")
def partition(lat, frame_array):
    return bl.build_partition(lat, frame_array)


@pytest.fixture(scope="session")
def stab_result(lat, spread, frame_array, partition):
    return ag.compute_stabilizer(lat, spread, frame_array, partition)
