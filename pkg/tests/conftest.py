from __future__ import annotations

from pathlib import Path

import pytest

from bimql.graph.build import build_graph
from bimql.ifc.extract import extract_model
from bimql.step.parser import parse_step
from bimql.store.db import build_store

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fzk_path() -> Path:
    return FIXTURE_DIR / "fzk_haus.ifc"


@pytest.fixture(scope="session")
def fzk_bytes(fzk_path) -> bytes:
    return fzk_path.read_bytes()


@pytest.fixture(scope="session")
def fzk_file(fzk_bytes):
    return parse_step(fzk_bytes)


@pytest.fixture(scope="session")
def fzk_model(fzk_file):
    return extract_model(fzk_file)


@pytest.fixture(scope="session")
def fzk_store(fzk_model, tmp_path_factory):
    return build_store(fzk_model, tmp_path_factory.mktemp("store") / "fzk.db")


@pytest.fixture(scope="session")
def fzk_graph(fzk_model):
    return build_graph(fzk_model.navigable_elements(), fzk_model.storeys)


@pytest.fixture(scope="session")
def storeys_by_id(fzk_model):
    return {s.storey_id: s for s in fzk_model.storeys}
