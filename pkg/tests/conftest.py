from __future__ import annotations

import pytest

from gelfand_scope.services import suzuki
from gelfand_scope.services.chartab import character_table
from gelfand_scope.services.corpus import load_corpus_group

SMALL_CORPUS = ["s3", "c6", "d8", "q8", "a4", "d10", "c12", "d12", "f20", "sl23"]
FILTER_CORPUS = SMALL_CORPUS + ["s4"]


@pytest.fixture(scope="session")
def corpus():
    loaded = {}

    def get(name: str):
        if name not in loaded:
            loaded[name] = load_corpus_group(name)
        return loaded[name]

    return get


@pytest.fixture(scope="session")
def sz2():
    return suzuki.suzuki_group(1)


@pytest.fixture(scope="session")
def sz8():
    return suzuki.suzuki_group(3)


@pytest.fixture(scope="session")
def sz8_table(sz8):
    return character_table(sz8.permutations)
