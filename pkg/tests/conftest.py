import json
from pathlib import Path

import pytest

from hopqa import PipelineConfig, load_split

FIXTURES = Path(__file__).parent / "fixtures"

# Answer strings the full pipeline is expected to produce on the demo split,
# in file order.  Two differ from gold only by extra qualifier tokens.
EXPECTED_PREDICTIONS = [
    "Montreuil-sous-Bois",
    "French-born",
    "Aram + Aram = Kinnaram",
    "Osita Chidoka",
    "Ralph Earnhardt",
    "Maria Louisa Kissam",
    "La Estatua De Carne",
    "Chinese In Paris",
]


@pytest.fixture(scope="session")
def demo_path() -> Path:
    return FIXTURES / "demo_cases.json"


@pytest.fixture(scope="session")
def demo_examples(demo_path):
    return load_split(demo_path)


@pytest.fixture(scope="session")
def demo_records(demo_path):
    with open(demo_path, encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture()
def default_config() -> PipelineConfig:
    return PipelineConfig()
