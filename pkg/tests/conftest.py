import os

import pytest

from atlas.datasets import write_synthetic_corpus
from atlas.gateway import MockGateway
from atlas.pipeline import run_pipeline
from atlas.reducer import ReducerParams


@pytest.fixture()
def mock_gw():
    return MockGateway()


@pytest.fixture(scope="session")
def small_artifacts(tmp_path_factory):
    """Artifacts from an 80-doc synthetic run; shared by service/CLI tests."""
    root = tmp_path_factory.mktemp("small")
    raw = os.path.join(root, "raw.json")
    write_synthetic_corpus(raw, n=80, seed=7)
    out = os.path.join(root, "artifacts")
    run_pipeline(raw, out, MockGateway(),
                 params=ReducerParams(seed=42, n_neighbors=10, n_epochs=100))
    return out


@pytest.fixture(scope="session")
def small_state(small_artifacts):
    from atlas.service import load_state

    return load_state(small_artifacts, MockGateway())


@pytest.fixture(scope="session")
def client(small_state):
    from fastapi.testclient import TestClient

    from atlas.service import create_app

    return TestClient(create_app(small_state))
