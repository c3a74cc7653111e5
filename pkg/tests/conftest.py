import pytest

from mtc import hopf, repcat, coend


def pytest_collection_modifyitems(config, items):
    if config.getoption("-m"):
        return
    skip_slow = pytest.mark.skip(reason="slow: run with -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def z2():
    return hopf.group_algebra([2])


@pytest.fixture(scope="session")
def sweedler():
    return hopf.sweedler()


@pytest.fixture(scope="session")
def dz2():
    return hopf.drinfeld_double(hopf.group_algebra([2]))


@pytest.fixture(scope="session")
def dsw():
    return hopf.drinfeld_double(hopf.sweedler())


@pytest.fixture(scope="session")
def dz2_ribbons(dz2):
    return hopf.solve_ribbon(dz2)


@pytest.fixture(scope="session")
def dz2_ribbon(dz2, dz2_ribbons):
    """The canonical ribbon element: the Drinfeld element u itself (it is in
    the solution list for this double and gives the toric-code twists)."""
    u = dz2.drinfeld_u()
    for v in dz2_ribbons:
        if v == u:
            return dz2.with_ribbon(v)
    raise AssertionError("u is not in the ribbon list")


@pytest.fixture(scope="session")
def dz2_coend(dz2_ribbon):
    return coend.build_full(dz2_ribbon)


@pytest.fixture(scope="session")
def dz2_simples(dz2_ribbon):
    return repcat.simples_data(dz2_ribbon)
