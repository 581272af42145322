from __future__ import annotations

import pytest

from beststop import build, pattern_class

_trees = {}


@pytest.fixture(scope="session")
def tree_for():
    """Session-cached tree builder: tree_for(name, n)."""

    def get(name, n):
        key = (name, n)
        if key not in _trees:
            _trees[key] = build(pattern_class(name), n)
        return _trees[key]

    return get
