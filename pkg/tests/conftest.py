import pytest

from quartic_lines.field import FieldSpec
from quartic_lines.geometry import IntersectionGraph, enumerate_lines
from quartic_lines.segre import build_dossier
from quartic_lines.surfaces import s5_mu0_surface


@pytest.fixture(scope="session")
def s5_surface():
    return s5_mu0_surface()


@pytest.fixture(scope="session")
def s5_lines(s5_surface):
    return enumerate_lines(s5_surface, ext=2)


@pytest.fixture(scope="session")
def s5_graph(s5_lines):
    return IntersectionGraph(s5_lines)


@pytest.fixture(scope="session")
def s5_dossiers(s5_surface, s5_lines):
    return [build_dossier(s5_surface, ln) for ln in s5_lines]


@pytest.fixture(scope="session")
def gf2():
    return FieldSpec.default(1)


@pytest.fixture(scope="session")
def gf4():
    return FieldSpec.default(2)


@pytest.fixture(scope="session")
def gf8():
    return FieldSpec.default(3)


@pytest.fixture(scope="session")
def gf16():
    return FieldSpec.default(4)
