import pytest

from vidcost import load_hardware, load_model_spec


@pytest.fixture(scope="session")
def wan():
    return load_model_spec("wan2.1-t2v-1.3b")


@pytest.fixture(scope="session")
def h100():
    return load_hardware("h100")
