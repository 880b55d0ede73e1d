import random

import pytest

from bcintegrate.model import (
    Attribute,
    BusinessComponent,
    Concept,
    Ontology,
    RelationKind,
    SemanticRelation,
    UmlAssociation,
    UmlClass,
    normalize_term,
)
from bcintegrate.transform import (
    MergePlan,
    TransformError,
    bc_to_ontology,
    build_merge_plan,
    ontology_to_bc,
)

from generators import random_component


def part_of(onto):
    return {(onto.concept(r.a).term.raw, onto.concept(r.b).term.raw)
            for r in onto.relations if r.kind is RelationKind.PART_OF}


def test_bc1_to_obc1(obc1):
    assert obc1.name == "OBC1"
    assert part_of(obc1) == {
        ("Laboratory", "Company"), ("Delegated medical", "Laboratory"),
        ("Research Team", "Laboratory"), ("Marketing Department", "Company"),
        ("Sales Department", "Company")}
    assert {c.origin for c in obc1} == {"BC1"}


def test_bc2_to_obc2(obc2):
    assert part_of(obc2) == {
        ("Workshop", "Company"), ("medical representative", "Workshop"),
        ("Research Team", "Workshop"), ("Marketing Department", "Company"),
        ("Sales Department", "Company")}


def test_empty_component():
    onto = bc_to_ontology(BusinessComponent("X"))
    assert len(onto) == 0 and onto.relations == []
    assert ontology_to_bc(onto) == BusinessComponent("X")


def test_plain_associations_and_attributes_are_metadata():
    bc = BusinessComponent("X", [UmlClass("Visit", [Attribute("date", "date")]), UmlClass("Doctor")],
                           [UmlAssociation("association", "Visit", "Doctor", "performedBy")])
    onto = bc_to_ontology(bc)
    assert onto.relations == []
    assert onto.associations == [("OX#visit", "OX#doctor", "performedBy")]
    assert onto.concept("OX#visit").attributes == (Attribute("date", "date"),)
    assert ontology_to_bc(onto) == bc


def test_identity_plan_round_trips_bc1(bc1, obc1):
    assert ontology_to_bc(obc1, MergePlan()).canonical() == bc1.canonical()


def obcr_fixture(obc1, obc2):
    onto = Ontology("OBCr", [*obc1.concepts, *obc2.concepts],
                    [r for o in (obc1, obc2) for r in o.relations])
    onto.add_relation(SemanticRelation(RelationKind.EQUIVALENCE, "OBC1#laboratory", "OBC2#workshop"))
    onto.add_relation(SemanticRelation(RelationKind.EQUIVALENCE, "OBC1#delegated medical",
                                       "OBC2#medical representative"))
    for term in ("company", "marketing department", "sales department", "research team"):
        onto.add_relation(SemanticRelation(RelationKind.EQUIVALENCE, f"OBC1#{term}", f"OBC2#{term}"))
    return onto


def test_merge_plan_for_obcr(obc1, obc2):
    plan = build_merge_plan(obcr_fixture(obc1, obc2), ["BC1", "BC2"])
    assert plan.rep("OBC2#workshop") == "OBC1#laboratory"
    assert plan.rep("OBC2#medical representative") == "OBC1#delegated medical"
    assert plan.aliases == {"OBC1#laboratory": ("Workshop",),
                            "OBC1#delegated medical": ("medical representative",)}
    assert plan.renames == {}
    # every alias sits in exactly one group
    groups = plan.groups()
    members = [m for ms in groups.values() for m in ms]
    assert len(members) == len(set(members)) == 12


def test_merge_plan_prefers_argument_order(obc1, obc2):
    plan = build_merge_plan(obcr_fixture(obc1, obc2), ["BC2", "BC1"])
    assert plan.rep("OBC1#laboratory") == "OBC2#workshop"


def test_obcr_to_bcr(obc1, obc2):
    onto = obcr_fixture(obc1, obc2)
    bcr = ontology_to_bc(onto, build_merge_plan(onto, ["BC1", "BC2"]))
    assert bcr.name == "BCr"
    classes = {c.name: c.aliases for c in bcr.classes}
    assert classes == {
        "Company": (), "Marketing Department": (), "Sales Department": (),
        "Laboratory": ("Workshop",), "Delegated medical": ("medical representative",),
        "Research Team": ()}
    assert sorted((a.whole, a.part) for a in bcr.associations) == [
        ("Company", "Laboratory"), ("Company", "Marketing Department"),
        ("Company", "Sales Department"), ("Laboratory", "Delegated medical"),
        ("Laboratory", "Research Team")]


def test_homonyms_are_renamed():
    onto = Ontology("OBCr", [Concept("OA#agent", "Agent", "A"), Concept("OB#agent", "Agent", "B"),
                             Concept("OA#x", "X", "A")])
    bc = ontology_to_bc(onto, build_merge_plan(onto))
    assert sorted(c.name for c in bc.classes) == ["A.Agent", "B.Agent", "X"]


def test_attribute_clash_on_merge():
    onto = Ontology("OM", [Concept("OA#x", "X", "A", [Attribute("n", "integer")]),
                           Concept("OB#y", "Y", "B", [Attribute("n", "string")])],
                    [SemanticRelation(RelationKind.SYNONYMY, "OA#x", "OB#y")])
    with pytest.raises(TransformError, match="conflicting datatypes"):
        ontology_to_bc(onto, build_merge_plan(onto))


def test_attributes_union_on_merge():
    onto = Ontology("OM", [Concept("OA#x", "X", "A", [Attribute("n", "integer")]),
                           Concept("OB#y", "Y", "B", [Attribute("n", "integer"), Attribute("m", "date")])],
                    [SemanticRelation(RelationKind.SYNONYMY, "OA#x", "OB#y")])
    [cls] = ontology_to_bc(onto, build_merge_plan(onto)).classes
    assert cls.attributes == (Attribute("n", "integer"), Attribute("m", "date"))
    assert cls.aliases == ("Y",)


def test_plan_with_unknown_id():
    with pytest.raises(TransformError, match="unknown concept"):
        ontology_to_bc(Ontology("O"), MergePlan(representative={"ghost": "ghost"}))


@pytest.mark.parametrize("seed", range(120))
def test_round_trip_random_components(seed):
    bc = random_component(random.Random(seed), f"C{seed}")
    onto = bc_to_ontology(bc)
    assert len(onto) == len(bc.classes)
    assert len(onto.relations) == sum(a.kind == "aggregation" for a in bc.associations)
    assert ontology_to_bc(onto, MergePlan()).canonical() == bc.canonical()


def test_merged_names_are_unique(obc1, obc2):
    onto = obcr_fixture(obc1, obc2)
    bc = ontology_to_bc(onto, build_merge_plan(onto))
    names = [normalize_term(c.name) for c in bc.classes]
    assert len(names) == len(set(names))
