import pytest

from cabinetkit import CabinetModel, OrientedBox, builtin_catalog, make_instance


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture
def simple_model(catalog):
    """One base box with a door and an adjustable shelf inside."""
    base = make_instance(
        catalog,
        "M-BB01",
        OrientedBox((600, 200, 900), (1200, 400, 1800)),
        {"N": 2, "NKA": 560, "NKB": 568, "DBXX": 1},
    )
    door = make_instance(
        catalog,
        "M-DOOR",
        OrientedBox((300, 9, 900), (560, 18, 1700)),
    )
    shelf = make_instance(
        catalog,
        "M-SHAD",
        OrientedBox((890, 200, 900), (568, 364, 18)),
    )
    return CabinetModel((base, door, shelf))
