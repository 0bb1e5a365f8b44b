import pytest

from torquo.fan import product
from torquo.gallery import build_z2, enumerate_test_fans, projective_space

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def corpus():
    return enumerate_test_fans()


@pytest.fixture(scope="session")
def z2():
    return build_z2()


@pytest.fixture(scope="session")
def p2xp2():
    p2 = projective_space(2)
    return product(p2, p2)


@pytest.fixture(scope="session")
def full_suite(corpus, z2, p2xp2):
    """Corpus fans plus the two fourfolds, as (name, fan) pairs."""
    return [(v.name, v.fan) for v in corpus] + [("P2xP2", p2xp2), ("Z2", z2.fan)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
