from functools import lru_cache

import pytest

from genprob.catalog import load, names


@lru_cache(maxsize=None)
def catalog_group(name):
    """Session-shared catalog groups: pair caches accumulate across tests."""
    return load(name)


def catalog_names(max_order=None):
    from genprob.catalog import entry

    out = []
    for name in names():
        if max_order is None or entry(name).expected_order <= max_order:
            out.append(name)
    return out


@pytest.fixture(scope="session")
def group_of():
    return catalog_group
