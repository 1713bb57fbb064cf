import functools

import pytest

from utaut import field_create, group_create


@functools.lru_cache(maxsize=None)
def grp(p, m, n, k):
    return group_create(field_create(p, m), n, k)


@pytest.fixture
def G():
    return grp
