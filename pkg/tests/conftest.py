"""Shared fixtures and options.

The generated Weyl groups are expensive (the rank-7 group takes about
a minute), so they are built once per session.  Tests marked ``long``
(multi-minute exhaustive certificates) only run with ``--long``.
"""

import pytest

from dplab.lattice import PicardLattice, generate_weyl


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="run the slow exhaustive certificates")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def w6():
    return generate_weyl(PicardLattice(6))


@pytest.fixture(scope="session")
def w7():
    return generate_weyl(PicardLattice(7))
