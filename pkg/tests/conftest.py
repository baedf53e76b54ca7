import pytest

from shardcalc.arrangement import parse_family


@pytest.fixture(scope="session")
def arrfam():
    """Session-wide arrangement cache.

    All per-arrangement caches (shard data, loop calculus, intervals) key on
    object identity, so tests must share one Arrangement per family tag.
    """
    cache = {}

    def get(tag: str):
        if tag not in cache:
            cache[tag] = parse_family(tag)
        return cache[tag]

    return get
