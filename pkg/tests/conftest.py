import numpy as np
import pytest

from mgrack.finite_group import SubgroupWitness, s3_presented
from mgrack.mgr import associated_mgr, semidirect_mgr
from mgrack.rack import GFamilyOfRacks, example_z3_s3

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def family():
    return example_z3_s3()


@pytest.fixture(scope="session")
def A(family):
    """Associated MGR of the Z3/S3 family (18 elements)."""
    return associated_mgr(family)


@pytest.fixture(scope="session")
def S(family):
    """X x (S3 |x S3), 108 elements."""
    return semidirect_mgr(family, SubgroupWitness(family.group, range(6)))


@pytest.fixture(scope="session")
def S18():
    """One point, S3 |x A3: small and not a multiple conjugation quandle."""
    G = s3_presented()
    F = GFamilyOfRacks(G, np.zeros((6, 1, 1), dtype=int))
    return semidirect_mgr(F, SubgroupWitness(G, (0, 1, 2)))
