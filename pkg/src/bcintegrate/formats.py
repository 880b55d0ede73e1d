"""JSON interchange documents for components (``.bc.json``) and ontologies
(``.onto.json``), plus the write-only OWL-functional-style listing
(``.ofn.txt``).

Serialization is canonical: concepts sorted by id, relations by
(kind, a, b), classes by name. Unknown fields are rejected.
"""

from __future__ import annotations

import json
import logging
from typing import Any

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

logger = logging.getLogger(__name__)

COMPONENT_SUFFIX = ".bc.json"
ONTOLOGY_SUFFIX = ".onto.json"
OWL_SUFFIX = ".ofn.txt"

_ENDPOINT_FIELDS = {
    RelationKind.PART_OF: ("part", "whole"),
    RelationKind.IS_A: ("sub", "super"),
    RelationKind.SYNONYMY: ("a", "b"),
    RelationKind.HOMONYMY: ("a", "b"),
    RelationKind.EQUIVALENCE: ("a", "b"),
}


class FormatError(ValueError):
    """A document could not be parsed or validated.

    ``location`` is either ``line L, column C`` for syntax errors or a JSON
    path such as ``$.associations[2].part``.
    """

    def __init__(self, message: str, location: str = "$", source: str | None = None):
        self.message = message
        self.location = location
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.source}: " if self.source else ""
        return f"{where}{self.location}: {self.message}"


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def _expect(value, kind, path):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        names = {dict: "object", list: "array", str: "string"}
        raise FormatError(f"expected {names.get(kind, kind.__name__)}", path)
    return value


def _fields(obj: dict, path: str, required: set[str], optional: set[str] = frozenset()):
    _expect(obj, dict, path)
    unknown = set(obj) - required - optional
    if unknown:
        raise FormatError(f"unknown field(s): {', '.join(sorted(unknown))}", path)
    missing = required - set(obj)
    if missing:
        raise FormatError(f"missing field(s): {', '.join(sorted(missing))}", path)


def _string(obj: dict, key: str, path: str) -> str:
    return _expect(obj[key], str, f"{path}.{key}")


def _attributes(items, path) -> tuple[Attribute, ...]:
    _expect(items, list, path)
    out = []
    seen = set()
    for i, item in enumerate(items):
        ipath = f"{path}[{i}]"
        _fields(item, ipath, {"name", "type"})
        name = _string(item, "name", ipath)
        if name in seen:
            raise FormatError(f"duplicate attribute name {name!r}", ipath)
        seen.add(name)
        out.append(Attribute(name, _string(item, "type", ipath)))
    return tuple(out)


def _aliases(items, path) -> tuple[str, ...]:
    _expect(items, list, path)
    return tuple(_expect(a, str, f"{path}[{i}]") for i, a in enumerate(items))


# -- components -------------------------------------------------------------

def parse_component_document(text: str) -> BusinessComponent:
    doc = _load(text)
    _fields(doc, "$", {"name", "classes", "associations"})
    name = _string(doc, "name", "$")
    classes = []
    names: dict[str, str] = {}
    for i, item in enumerate(_expect(doc["classes"], list, "$.classes")):
        path = f"$.classes[{i}]"
        _fields(item, path, {"name"}, {"attributes", "aliases"})
        cname = _string(item, "name", path)
        norm = normalize_term(cname)
        if not norm:
            raise FormatError(f"class name {cname!r} has no letters or digits", f"{path}.name")
        if norm in names:
            raise FormatError(f"duplicate class name {cname!r}", f"{path}.name")
        names[norm] = cname
        classes.append(UmlClass(cname, _attributes(item.get("attributes", []), f"{path}.attributes"),
                                _aliases(item.get("aliases", []), f"{path}.aliases")))
    declared = {c.name for c in classes}
    associations = []
    for i, item in enumerate(_expect(doc["associations"], list, "$.associations")):
        path = f"$.associations[{i}]"
        _expect(item, dict, path)
        kind = item.get("kind")
        if kind == "aggregation":
            ends = ("whole", "part")
        elif kind == "association":
            ends = ("from", "to")
        else:
            raise FormatError(
                f"unknown association kind {kind!r}; allowed: aggregation, association",
                f"{path}.kind")
        _fields(item, path, {"kind", *ends}, {"label"})
        first, second = (_string(item, e, path) for e in ends)
        for end, value in zip(ends, (first, second)):
            if value not in declared:
                raise FormatError(f"reference to unknown class {value!r}", f"{path}.{end}")
        label = item.get("label")
        if label is not None:
            _expect(label, str, f"{path}.label")
        associations.append(UmlAssociation(kind, first, second, label))
    try:
        return BusinessComponent(name, classes, associations)
    except ModelError as exc:
        raise FormatError(str(exc), "$.associations") from None


def component_to_dict(bc: BusinessComponent) -> dict:
    classes = []
    for cls in sorted(bc.classes, key=lambda c: c.name):
        entry: dict[str, Any] = {"name": cls.name}
        entry["attributes"] = [{"name": a.name, "type": a.datatype} for a in cls.attributes]
        if cls.aliases:
            entry["aliases"] = sorted(cls.aliases)
        classes.append(entry)
    associations = []
    for assoc in sorted(set(bc.associations), key=lambda a: a.sort_key):
        if assoc.kind == "aggregation":
            entry = {"kind": "aggregation", "whole": assoc.whole, "part": assoc.part}
        else:
            entry = {"kind": "association", "from": assoc.whole, "to": assoc.part}
        if assoc.label is not None:
            entry["label"] = assoc.label
        associations.append(entry)
    return {"name": bc.name, "classes": classes, "associations": associations}


def serialize_component_document(bc: BusinessComponent) -> str:
    return dumps(component_to_dict(bc))


# -- ontologies -------------------------------------------------------------

def parse_ontology_document(text: str) -> Ontology:
    """Parse and validate an ontology document.

    Relation endpoints may name a concept by id or, failing that, by a term
    that identifies exactly one concept. Duplicate relations are dropped with
    a warning.
    """
    doc = _load(text)
    _fields(doc, "$", {"name", "concepts", "relations"}, {"associations"})
    name = _string(doc, "name", "$")
    onto = Ontology(name)
    for i, item in enumerate(_expect(doc["concepts"], list, "$.concepts")):
        path = f"$.concepts[{i}]"
        _fields(item, path, {"term"}, {"id", "origin", "attributes", "aliases"})
        term = Term(_string(item, "term", path))
        if not term.normalized:
            raise FormatError(f"term {term.raw!r} has no letters or digits", f"{path}.term")
        cid = _string(item, "id", path) if "id" in item else f"{name}#{term.normalized}"
        origin = _string(item, "origin", path) if "origin" in item else "domain"
        if cid in onto:
            raise FormatError(f"duplicate concept id {cid!r}", path)
        onto.add_concept(Concept(
            cid, term, origin,
            _attributes(item.get("attributes", []), f"{path}.attributes"),
            _aliases(item.get("aliases", []), f"{path}.aliases"),
        ))

    def resolve(ref, path):
        _expect(ref, str, path)
        if ref in onto:
            return ref
        matches = sorted(onto.concepts_by_normalized_term(normalize_term(ref)))
        if len(matches) == 1:
            return matches[0]
        if matches:
            raise FormatError(f"ambiguous reference {ref!r} matches {', '.join(matches)}", path)
        raise FormatError(f"dangling reference {ref!r}", path)

    allowed = ", ".join(k.value for k in RelationKind)
    for i, item in enumerate(_expect(doc["relations"], list, "$.relations")):
        path = f"$.relations[{i}]"
        _expect(item, dict, path)
        try:
            kind = RelationKind(item.get("type"))
        except ValueError:
            raise FormatError(
                f"unknown relation type {item.get('type')!r}; allowed: {allowed}",
                f"{path}.type") from None
        ends = _ENDPOINT_FIELDS[kind]
        _fields(item, path, {"type", *ends}, {"provenance", "note"})
        a, b = (resolve(item[e], f"{path}.{e}") for e in ends)
        provenance = item.get("provenance", "input")
        note = item.get("note")
        if note is not None:
            _expect(note, str, f"{path}.note")
        try:
            relation = SemanticRelation(kind, a, b, provenance, note)
            added = onto.add_relation(relation)
        except ModelError as exc:
            raise FormatError(str(exc), path) from None
        if not added:
            logger.warning("%s: duplicate relation %s dropped", path, relation)

    for i, item in enumerate(_expect(doc.get("associations", []), list, "$.associations")):
        path = f"$.associations[{i}]"
        _fields(item, path, {"from", "to"}, {"label"})
        label = item.get("label")
        if label is not None:
            _expect(label, str, f"{path}.label")
        onto.add_association(resolve(item["from"], f"{path}.from"),
                             resolve(item["to"], f"{path}.to"), label)
    return onto


def ontology_to_dict(o: Ontology) -> dict:
    concepts = []
    for c in sorted(o.concepts, key=lambda c: c.id):
        entry: dict[str, Any] = {"id": c.id, "term": c.term.raw, "origin": c.origin}
        if c.attributes:
            entry["attributes"] = [{"name": a.name, "type": a.datatype} for a in c.attributes]
        if c.aliases:
            entry["aliases"] = sorted(c.aliases)
        concepts.append(entry)
    relations = []
    for r in o.relations:
        first, second = _ENDPOINT_FIELDS[r.kind]
        entry = {"type": r.kind.value, first: r.a, second: r.b}
        if r.provenance != "input":
            entry["provenance"] = r.provenance
        if r.note is not None:
            entry["note"] = r.note
        relations.append(entry)
    doc: dict[str, Any] = {"name": o.name, "concepts": concepts, "relations": relations}
    if o.associations:
        doc["associations"] = [
            {"from": s, "to": t, **({"label": lab} if lab is not None else {})}
            for s, t, lab in sorted(set(o.associations), key=lambda x: (x[0], x[1], x[2] or ""))
        ]
    return doc


def serialize_ontology_document(o: Ontology) -> str:
    return dumps(ontology_to_dict(o))


def dumps(doc) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- OWL functional-style listing --------------------------------------------

def owl_axiom_lines(o: Ontology) -> list[str]:
    """Axiom lines of the listing, without the ``Ontology(`` wrapper.

    Classes are rendered by term, so concepts sharing a term render as one
    class name: a line produced twice is written once, and equivalences whose
    two sides render identically are omitted.
    """
    origin_rank: dict[str, int] = {}
    for c in o.concepts:
        origin_rank.setdefault(c.origin, len(origin_rank))
    ordered = sorted(o.concepts, key=lambda c: (origin_rank[c.origin], c.id))

    lines: list[str] = []
    seen: set[str] = set()

    def emit(line):
        if line not in seen:
            seen.add(line)
            lines.append(line)

    for c in ordered:
        parents = sorted(o.parents_of(c.id))
        if not parents:
            emit(f"(Class {c.term.raw})")
        for pid in parents:
            parent = o.concept(pid).term.raw
            emit(f"(Class {c.term.raw} partial restriction(partOf someValuesFrom({parent})))")
    for r in o.relations:
        if r.kind in SIMILARITY_KINDS:
            left, right = o.concept(r.a).term.raw, o.concept(r.b).term.raw
            if left != right:
                emit(f"(EquivalentClass({left}, {right}))")
    return lines


def emit_owl_functional(o: Ontology) -> str:
    lines = owl_axiom_lines(o)
    if not lines:
        return f"Ontology({o.name})\n"
    return "\n".join([f"Ontology({o.name}", *lines, ")"]) + "\n"
