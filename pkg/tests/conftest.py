from pathlib import Path

import pytest

from bcintegrate.formats import parse_component_document, parse_ontology_document
from bcintegrate.transform import bc_to_ontology

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def bc1():
    return parse_component_document((FIXTURES / "bc1.bc.json").read_text())


@pytest.fixture
def bc2():
    return parse_component_document((FIXTURES / "bc2.bc.json").read_text())


@pytest.fixture
def obc1(bc1):
    return bc_to_ontology(bc1)


@pytest.fixture
def obc2(bc2):
    return bc_to_ontology(bc2)


@pytest.fixture
def od():
    return parse_ontology_document((FIXTURES / "od.onto.json").read_text())
