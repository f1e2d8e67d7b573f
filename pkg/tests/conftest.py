import pathlib

import pytest

from lipgait import WalkerParams, build_step_matrices, design_cycle

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="session")
def params():
    return WalkerParams(h=1.0, g=9.8, m=50.0, L_max=0.75)


@pytest.fixture(scope="session")
def cycle(params):
    return design_cycle(params, L_c=0.5, T_c=0.4)


@pytest.fixture(scope="session")
def matrices(params, cycle):
    return build_step_matrices(params, cycle.T_c)


@pytest.fixture(scope="session")
def table1_config():
    return str(CONFIG_DIR / "table1.toml")


@pytest.fixture(scope="session")
def lqr_pair_config():
    return str(CONFIG_DIR / "table1_lqr_pair.toml")
