import pytest

from bpcentre import EtaRTable


@pytest.fixture(scope="session")
def table_p3():
    """Right-unit table at p=3 up to weight 13 (covers v_3)."""
    return EtaRTable(3, 13).populate()


@pytest.fixture(scope="session")
def table_p5():
    """Right-unit table at p=5 up to weight 6."""
    return EtaRTable(5, 6).populate()
