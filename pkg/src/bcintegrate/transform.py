"""Component <-> ontology transformations.

A UML class becomes a concept, an aggregation becomes ``partOf(part, whole)``.
Attributes and plain associations carry over as metadata only. The reverse
direction collapses synonym-connected concepts into one class according to a
:class:`MergePlan`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .model import (
    SIMILARITY_KINDS,
    Attribute,
    BusinessComponent,
    Concept,
    ModelError,
    Ontology,
    RelationKind,
    SemanticRelation,
    Term,
    UmlAssociation,
    UmlClass,
    normalize_term,
)


class TransformError(ModelError):
    pass


def ontology_name_for(component_name: str) -> str:
    return f"O{component_name}"


def component_name_for(ontology_name: str) -> str:
    if len(ontology_name) > 1 and ontology_name.startswith("O"):
        return ontology_name[1:]
    return f"{ontology_name}-component"


def bc_to_ontology(bc: BusinessComponent) -> Ontology:
    name = ontology_name_for(bc.name)
    onto = Ontology(name)
    ids: dict[str, str] = {}
    for cls in bc.classes:
        term = Term(cls.name)
        cid = f"{name}#{term.normalized}"
        ids[cls.name] = cid
        onto.add_concept(Concept(cid, term, bc.name, cls.attributes, cls.aliases))
    for assoc in bc.associations:
        if assoc.kind == "aggregation":
            onto.add_relation(SemanticRelation(
                RelationKind.PART_OF, ids[assoc.part], ids[assoc.whole], note=assoc.label))
        else:
            onto.add_association(ids[assoc.whole], ids[assoc.part], assoc.label)
    return onto


@dataclass
class MergePlan:
    """How the concepts of a result ontology collapse into UML classes.

    ``representative`` maps every concept mentioned by a synonymy or
    equivalence relation to the id standing for its class; concepts not in
    the map stand for themselves. ``aliases`` lists, per representative, the
    other raw terms merged into it. ``renames`` gives origin-qualified class
    names for representatives whose terms collide.
    """

    representative: dict[str, str] = field(default_factory=dict)
    aliases: dict[str, tuple[str, ...]] = field(default_factory=dict)
    renames: dict[str, str] = field(default_factory=dict)

    def rep(self, cid: str) -> str:
        return self.representative.get(cid, cid)

    def groups(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for member, rep in sorted(self.representative.items()):
            out.setdefault(rep, []).append(member)
        return out

    def to_dict(self) -> dict:
        return {
            "groups": [
                {"representative": rep, "members": members,
                 "aliases": list(self.aliases.get(rep, ()))}
                for rep, members in sorted(self.groups().items())
            ],
            "renames": dict(sorted(self.renames.items())),
        }


def build_merge_plan(o: Ontology, origin_order: Sequence[str] | None = None) -> MergePlan:
    """Partition synonym-connected concepts and pick a representative each.

    The representative comes from the earliest origin in ``origin_order``
    (default: first appearance in ``o``), ties broken by raw term then id.
    """
    if origin_order is None:
        origin_order = list(dict.fromkeys(c.origin for c in o.concepts))
    rank = {origin: i for i, origin in enumerate(origin_order)}

    def choice_key(cid):
        c = o.concept(cid)
        return (rank.get(c.origin, len(rank)), c.term.raw, c.id)

    graph = nx.Graph()
    for r in o.relations:
        if r.kind in SIMILARITY_KINDS:
            graph.add_edge(r.a, r.b)

    plan = MergePlan()
    for members in nx.connected_components(graph):
        ordered = sorted(members, key=choice_key)
        rep = ordered[0]
        rep_term = o.concept(rep).term.raw
        for m in ordered:
            plan.representative[m] = rep
        aliases = sorted({o.concept(m).term.raw for m in ordered} - {rep_term})
        if aliases:
            plan.aliases[rep] = tuple(aliases)

    by_name: dict[str, list[str]] = {}
    for c in o.concepts:
        if plan.rep(c.id) == c.id:
            by_name.setdefault(c.normalized, []).append(c.id)
    for norm, reps in by_name.items():
        if len(reps) > 1:
            for cid in reps:
                c = o.concept(cid)
                plan.renames[cid] = f"{c.origin}.{c.term.raw}"
            qualified = [normalize_term(plan.renames[cid]) for cid in reps]
            if len(set(qualified)) != len(qualified):
                raise TransformError(f"cannot disambiguate homonymous classes {sorted(reps)}")
    return plan


def ontology_to_bc(o: Ontology, plan: MergePlan | None = None) -> BusinessComponent:
    plan = plan if plan is not None else MergePlan()
    for cid in list(plan.representative) + list(plan.representative.values()) + list(plan.renames):
        if cid not in o:
            raise TransformError(f"merge plan references unknown concept {cid!r}")

    members: dict[str, list[str]] = {}
    for c in o.concepts:
        members.setdefault(plan.rep(c.id), []).append(c.id)

    def class_name(rep):
        return plan.renames.get(rep, o.concept(rep).term.raw)

    classes = []
    for rep, group in members.items():
        ordered = [rep] + [m for m in group if m != rep]
        attrs: dict[str, Attribute] = {}
        aliases = set(plan.aliases.get(rep, ()))
        for cid in ordered:
            concept = o.concept(cid)
            aliases.update(concept.aliases)
            for attr in concept.attributes:
                known = attrs.get(attr.name)
                if known is None:
                    attrs[attr.name] = attr
                elif known.datatype != attr.datatype:
                    raise TransformError(
                        f"attribute {attr.name!r} of {class_name(rep)!r} has conflicting "
                        f"datatypes {known.datatype!r} and {attr.datatype!r}")
        classes.append(UmlClass(class_name(rep), tuple(attrs.values()), tuple(sorted(aliases))))

    associations: list[UmlAssociation] = []
    seen = set()

    def add(assoc):
        key = assoc if assoc.kind == "association" else (assoc.whole, assoc.part)
        if key not in seen:
            seen.add(key)
            associations.append(assoc)

    for r in o.relations:
        if r.kind is not RelationKind.PART_OF:
            continue
        part, whole = plan.rep(r.a), plan.rep(r.b)
        if part == whole:
            continue
        add(UmlAssociation("aggregation", class_name(whole), class_name(part), r.note))
    for source, target, label in o.associations:
        add(UmlAssociation("association", class_name(plan.rep(source)),
                           class_name(plan.rep(target)), label))
    try:
        return BusinessComponent(component_name_for(o.name), classes, associations)
    except ModelError as exc:
        raise TransformError(f"merged component is invalid: {exc}") from None
