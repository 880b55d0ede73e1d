import random

import pytest
from hypothesis import given, settings, strategies as st

from bcintegrate.model import (
    BusinessComponent,
    Concept,
    Correspondence,
    ModelError,
    Ontology,
    RelationKind,
    SemanticRelation,
    Term,
    UmlAssociation,
    UmlClass,
    children_of,
    concepts_by_normalized_term,
    is_composite,
    normalize_term,
    relations_between,
)

from generators import random_ontology


@pytest.mark.parametrize("raw,expected", [
    ("Research Team", "research team"),
    ("  medical_Representative ", "medical representative"),
    ("SalesDepartment", "sales department"),
    ("HTTPServer", "http server"),
    ("a\t\tb__c", "a b c"),
])
def test_normalize_term(raw, expected):
    assert normalize_term(raw) == expected


@given(st.text())
def test_normalize_is_idempotent(raw):
    once = normalize_term(raw)
    assert normalize_term(once) == once


@given(st.text(alphabet=st.characters(categories=["L", "N", "Zs", "Pc"])))
def test_normalized_nonempty_with_alnum(raw):
    if any(ch.isalnum() for ch in raw):
        assert normalize_term(raw)


def test_term_fields():
    t = Term("Research Team")
    assert t.raw == "Research Team" and t.normalized == "research team"


def test_symmetric_relations_are_canonical():
    onto = Ontology("O", [Concept("O#a", "a"), Concept("O#b", "b")])
    assert onto.add_relation(SemanticRelation(RelationKind.SYNONYMY, "O#b", "O#a"))
    assert not onto.add_relation(SemanticRelation(RelationKind.SYNONYMY, "O#a", "O#b"))
    [rel] = onto.relations
    assert (rel.a, rel.b) == ("O#a", "O#b")


def test_directed_relations_keep_direction():
    rel = SemanticRelation(RelationKind.PART_OF, "z", "a")
    assert (rel.a, rel.b) == ("z", "a")


def test_self_relation_rejected():
    with pytest.raises(ModelError):
        SemanticRelation(RelationKind.SYNONYMY, "x", "x")


def test_dangling_endpoint_rejected():
    onto = Ontology("O", [Concept("O#a", "a")])
    with pytest.raises(ModelError):
        onto.add_relation(SemanticRelation(RelationKind.SYNONYMY, "O#a", "O#missing"))


def test_part_of_cycle_rejected():
    onto = Ontology("O", [Concept(f"O#{x}", x) for x in "abc"])
    onto.add_relation(SemanticRelation(RelationKind.PART_OF, "O#a", "O#b"))
    onto.add_relation(SemanticRelation(RelationKind.PART_OF, "O#b", "O#c"))
    with pytest.raises(ModelError, match="cycle"):
        onto.add_relation(SemanticRelation(RelationKind.PART_OF, "O#c", "O#a"))


def test_relations_between_on_domain_fixture(od):
    rels = relations_between(od, "OD#delegated medical", "OD#medical representative")
    assert {r.kind for r in rels} == {RelationKind.SYNONYMY}
    assert relations_between(od, "OD#medical representative", "OD#delegated medical") == rels
    assert relations_between(od, "OD#laboratory", "OD#workshop") == set()
    assert relations_between(od, "OD#laboratory", "OD#laboratory") == set()
    assert relations_between(od, "OD#laboratory", "nowhere") == set()


def test_relations_between_reports_stored_direction(od):
    [rel] = relations_between(od, "OD#company", "OD#laboratory")
    assert (rel.kind, rel.a, rel.b) == (RelationKind.PART_OF, "OD#laboratory", "OD#company")


def test_children_and_composite(obc1, obc2):
    assert children_of(obc1, "OBC1#laboratory") == {"OBC1#delegated medical", "OBC1#research team"}
    assert children_of(obc2, "OBC2#workshop") == {"OBC2#medical representative", "OBC2#research team"}
    assert children_of(obc1, "OBC1#research team") == set()
    assert is_composite(obc1, "OBC1#laboratory")
    assert is_composite(obc1, "OBC1#company")
    assert not is_composite(obc1, "OBC1#marketing department")
    with pytest.raises(KeyError):
        children_of(obc1, "OBC1#nothing")
    with pytest.raises(KeyError):
        is_composite(obc1, "OBC1#nothing")


def test_concepts_by_normalized_term(obc1, obc2):
    assert concepts_by_normalized_term(obc1, "research team") == {"OBC1#research team"}
    assert concepts_by_normalized_term(obc1, "warehouse") == set()
    merged = Ontology("M", [*obc1.concepts, Concept("OBC2#research team", "Research team", "BC2")])
    assert concepts_by_normalized_term(merged, "research team") == {
        "OBC1#research team", "OBC2#research team"}


@pytest.mark.parametrize("seed", range(60))
def test_children_of_agrees_with_scan(seed):
    onto = random_ontology(random.Random(seed), "R")
    for c in onto:
        scan = {r.a for r in onto.relations if r.kind is RelationKind.PART_OF and r.b == c.id}
        assert children_of(onto, c.id) == scan
        assert is_composite(onto, c.id) == bool(scan)


def test_component_validation():
    with pytest.raises(ModelError, match="unknown class"):
        BusinessComponent("X", [UmlClass("A")], [UmlAssociation("aggregation", "A", "Lab")])
    with pytest.raises(ModelError, match="duplicate"):
        BusinessComponent("X", [UmlClass("Research Team"), UmlClass("ResearchTeam")])
    with pytest.raises(ModelError, match="cycle"):
        BusinessComponent("X", [UmlClass("A"), UmlClass("B")], [
            UmlAssociation("aggregation", "A", "B"), UmlAssociation("aggregation", "B", "A")])
    # plain associations may form cycles
    BusinessComponent("X", [UmlClass("A"), UmlClass("B")], [
        UmlAssociation("association", "A", "B"), UmlAssociation("association", "B", "A")])


def test_correspondence_invariants():
    with pytest.raises(ModelError):
        Correspondence("a", "b", 0.5, "homonym", "syntactic")
    with pytest.raises(ModelError):
        Correspondence("a", "b", 1.5, "synonym", "syntactic")
