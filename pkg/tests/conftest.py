"""Shared fixtures: the engine runs are cached once per session."""

import pytest

from semiconj import SelfMap, halfplane_semiconjugation, planar_semiconjugation


@pytest.fixture(scope="session")
def map_dilation():
    return SelfMap.from_source("2*z+i", "halfplane")


@pytest.fixture(scope="session")
def map_translation():
    return SelfMap.from_source("z+i", "halfplane")


@pytest.fixture(scope="session")
def map_nzs():
    return SelfMap.from_source("z+1-1/(z+i)", "halfplane")


@pytest.fixture(scope="session")
def g_dilation(map_dilation):
    return halfplane_semiconjugation(map_dilation, 1j)


@pytest.fixture(scope="session")
def g_dilation_alt(map_dilation):
    return halfplane_semiconjugation(map_dilation, 2j)


@pytest.fixture(scope="session")
def h_translation(map_translation):
    return planar_semiconjugation(map_translation, 1j)


@pytest.fixture(scope="session")
def h_translation_alt(map_translation):
    return planar_semiconjugation(map_translation, 1 + 2j)


@pytest.fixture(scope="session")
def g_nzs(map_nzs):
    # default config: the slow honest run (residual-driven continuation)
    return halfplane_semiconjugation(map_nzs, 1j)
