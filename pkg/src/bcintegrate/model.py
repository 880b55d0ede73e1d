"""Shared data model: terms, concepts, semantic relations, ontologies and
business components.

Ontologies index their relations by endpoint so the structural queries used
by alignment and enrichment (``relations_between``, ``children_of``) do not
scan the whole relation set.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "ModelError",
    "normalize_term",
    "Term",
    "RelationKind",
    "SYMMETRIC_KINDS",
    "SIMILARITY_KINDS",
    "PROVENANCES",
    "SemanticRelation",
    "Attribute",
    "Concept",
    "Ontology",
    "UmlClass",
    "UmlAssociation",
    "BusinessComponent",
    "Correspondence",
    "relations_between",
    "children_of",
    "is_composite",
    "concepts_by_normalized_term",
]


class ModelError(ValueError):
    """Raised when a model invariant would be violated."""


_CAMEL_LOWER_UPPER = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_CAMEL_ACRONYM = re.compile(r"(?<=[A-Z])(?=[A-Z][a-z])")
_SEPARATORS = re.compile(r"[\s_]+")


def normalize_term(raw: str) -> str:
    """Canonical comparison form of a term.

    camelCase boundaries and underscores become single spaces, whitespace runs
    collapse, and the result is lowercased and trimmed.

    >>> normalize_term("  medical_Representative ")
    'medical representative'
    >>> normalize_term("SalesDepartment")
    'sales department'
    """
    text = _CAMEL_LOWER_UPPER.sub(" ", raw)
    text = _CAMEL_ACRONYM.sub(" ", text)
    text = _SEPARATORS.sub(" ", text)
    return text.strip().lower()


@dataclass(frozen=True)
class Term:
    raw: str
    normalized: str = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "normalized", normalize_term(self.raw))

    def __str__(self):
        return self.raw


class RelationKind(str, enum.Enum):
    SYNONYMY = "synonymy"
    HOMONYMY = "homonymy"
    EQUIVALENCE = "equivalence"
    PART_OF = "partOf"
    IS_A = "isA"

    def __str__(self):
        return self.value


SYMMETRIC_KINDS = frozenset(
    {RelationKind.SYNONYMY, RelationKind.HOMONYMY, RelationKind.EQUIVALENCE}
)
# Kinds that make two concepts "the same notion".
SIMILARITY_KINDS = frozenset({RelationKind.SYNONYMY, RelationKind.EQUIVALENCE})

PROVENANCES = ("input", "case1", "case2", "case3")


@dataclass(frozen=True)
class SemanticRelation:
    """Typed edge between two concept ids.

    For ``partOf`` ``a`` is the part and ``b`` the whole; for ``isA`` ``a`` is
    the sub-concept. Symmetric kinds are stored with ``a < b``. Provenance and
    note do not take part in equality, so a derived relation equals the same
    relation declared as input.
    """

    kind: RelationKind
    a: str
    b: str
    provenance: str = field(default="input", compare=False)
    note: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", RelationKind(self.kind))
        if self.a == self.b:
            raise ModelError(f"relation {self.kind} links {self.a!r} to itself")
        if self.provenance not in PROVENANCES:
            raise ModelError(f"unknown provenance {self.provenance!r}")
        if self.kind in SYMMETRIC_KINDS and self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def symmetric(self) -> bool:
        return self.kind in SYMMETRIC_KINDS

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.a, self.b)

    def other(self, cid: str) -> str:
        return self.b if cid == self.a else self.a

    def __str__(self):
        return f"{self.kind.value}({self.a}, {self.b})"


@dataclass(frozen=True)
class Attribute:
    name: str
    datatype: str


@dataclass(frozen=True)
class Concept:
    """A named ontology node.

    ``attributes`` and ``aliases`` are metadata carried over from the UML
    class the concept was generated from; no rule reads them.
    """

    id: str
    term: Term
    origin: str = "domain"
    attributes: tuple[Attribute, ...] = ()
    aliases: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ModelError("concept id must be non-empty")
        if isinstance(self.term, str):
            object.__setattr__(self, "term", Term(self.term))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "aliases", tuple(self.aliases))

    @property
    def normalized(self) -> str:
        return self.term.normalized


class Ontology:
    """A named set of concepts plus a set of semantic relations.

    Concepts keep insertion order. Plain UML associations that do not map to a
    semantic relation ride along in ``associations`` as
    ``(from_id, to_id, label)`` triples.
    """

    def __init__(self, name: str, concepts: Iterable[Concept] = (),
                 relations: Iterable[SemanticRelation] = (),
                 associations: Iterable[tuple[str, str, str | None]] = ()):
        if not name:
            raise ModelError("ontology name must be non-empty")
        self.name = name
        self._concepts: dict[str, Concept] = {}
        self._by_term: dict[str, list[str]] = {}
        self._relations: dict[tuple[str, str, str], SemanticRelation] = {}
        self._incident: dict[str, set[tuple[str, str, str]]] = {}
        self._parts: dict[str, set[str]] = {}    # whole -> parts
        self._wholes: dict[str, set[str]] = {}   # part -> wholes
        self.associations: list[tuple[str, str, str | None]] = []
        for concept in concepts:
            self.add_concept(concept)
        for relation in relations:
            self.add_relation(relation)
        for assoc in associations:
            self.add_association(*assoc)

    def __repr__(self):
        return (f"Ontology({self.name!r}, {len(self._concepts)} concepts, "
                f"{len(self._relations)} relations)")

    def __contains__(self, cid) -> bool:
        return cid in self._concepts

    def __len__(self):
        return len(self._concepts)

    def __iter__(self) -> Iterator[Concept]:
        return iter(self._concepts.values())

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return (self.name == other.name
                and self._concepts == other._concepts
                and set(self._relations) == set(other._relations)
                and sorted(self.associations, key=_assoc_key)
                == sorted(other.associations, key=_assoc_key))

    __hash__ = None

    @property
    def concepts(self) -> list[Concept]:
        return list(self._concepts.values())

    @property
    def relations(self) -> list[SemanticRelation]:
        return sorted(self._relations.values(), key=lambda r: r.key)

    def concept(self, cid: str) -> Concept:
        try:
            return self._concepts[cid]
        except KeyError:
            raise KeyError(f"unknown concept id {cid!r} in ontology {self.name!r}") from None

    def add_concept(self, concept: Concept) -> Concept:
        if concept.id in self._concepts:
            raise ModelError(f"duplicate concept id {concept.id!r} in {self.name!r}")
        self._concepts[concept.id] = concept
        self._by_term.setdefault(concept.normalized, []).append(concept.id)
        self._incident[concept.id] = set()
        self._parts[concept.id] = set()
        self._wholes[concept.id] = set()
        return concept

    def has_relation(self, relation: SemanticRelation) -> bool:
        return relation.key in self._relations

    def add_relation(self, relation: SemanticRelation) -> bool:
        """Insert a relation; returns False if it was already present."""
        for end in (relation.a, relation.b):
            if end not in self._concepts:
                raise ModelError(
                    f"{relation} references unknown concept {end!r} in {self.name!r}")
        if relation.key in self._relations:
            return False
        if relation.kind is RelationKind.PART_OF:
            if self._reaches_whole(relation.b, relation.a):
                raise ModelError(f"{relation} would create a partOf cycle in {self.name!r}")
            self._parts[relation.b].add(relation.a)
            self._wholes[relation.a].add(relation.b)
        self._relations[relation.key] = relation
        self._incident[relation.a].add(relation.key)
        self._incident[relation.b].add(relation.key)
        return True

    def add_association(self, source: str, target: str, label: str | None = None):
        for end in (source, target):
            if end not in self._concepts:
                raise ModelError(f"association references unknown concept {end!r}")
        self.associations.append((source, target, label))

    def _reaches_whole(self, start: str, goal: str) -> bool:
        # Is ``goal`` reachable from ``start`` following part -> whole edges?
        stack, seen = [start], set()
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self._wholes.get(node, ()))
        return False

    def relations_between(self, c1: str, c2: str) -> set[SemanticRelation]:
        if c1 not in self._concepts or c2 not in self._concepts or c1 == c2:
            return set()
        shared = self._incident[c1] & self._incident[c2]
        return {self._relations[k] for k in shared}

    def relations_of(self, cid: str) -> list[SemanticRelation]:
        return sorted((self._relations[k] for k in self._incident.get(cid, ())),
                      key=lambda r: r.key)

    def children_of(self, cid: str) -> set[str]:
        self.concept(cid)
        return set(self._parts[cid])

    def parents_of(self, cid: str) -> set[str]:
        self.concept(cid)
        return set(self._wholes[cid])

    def is_composite(self, cid: str) -> bool:
        return bool(self.children_of(cid))

    def concepts_by_normalized_term(self, normalized: str) -> set[str]:
        return set(self._by_term.get(normalized, ()))

    def copy(self, name: str | None = None) -> Ontology:
        return Ontology(name or self.name, self._concepts.values(),
                        self._relations.values(), self.associations)


def _assoc_key(assoc):
    source, target, label = assoc
    return (source, target, label or "")


def relations_between(o: Ontology, c1: str, c2: str) -> set[SemanticRelation]:
    """All relations of ``o`` whose endpoint set is ``{c1, c2}``."""
    return o.relations_between(c1, c2)


def children_of(o: Ontology, c: str) -> set[str]:
    """Ids that are ``partOf`` ``c``. Raises KeyError for unknown ids."""
    return o.children_of(c)


def is_composite(o: Ontology, c: str) -> bool:
    return o.is_composite(c)


def concepts_by_normalized_term(o: Ontology, t: str) -> set[str]:
    return o.concepts_by_normalized_term(t)


# -- business components ----------------------------------------------------

@dataclass(frozen=True)
class UmlClass:
    name: str
    attributes: tuple[Attribute, ...] = ()
    aliases: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "aliases", tuple(self.aliases))
        names = [a.name for a in self.attributes]
        if len(names) != len(set(names)):
            raise ModelError(f"class {self.name!r} has duplicate attribute names")


@dataclass(frozen=True)
class UmlAssociation:
    """``aggregation`` reads whole/part; a plain ``association`` stores its
    ``from`` end in ``whole`` and its ``to`` end in ``part``."""

    kind: str
    whole: str
    part: str
    label: str | None = None

    def __post_init__(self):
        if self.kind not in ("aggregation", "association"):
            raise ModelError(f"unknown association kind {self.kind!r}")

    @property
    def sort_key(self):
        return (self.kind, self.whole, self.part, self.label or "")


@dataclass(frozen=True)
class BusinessComponent:
    name: str
    classes: tuple[UmlClass, ...] = ()
    associations: tuple[UmlAssociation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "associations", tuple(self.associations))
        if not self.name:
            raise ModelError("component name must be non-empty")
        seen: dict[str, str] = {}
        for cls in self.classes:
            norm = normalize_term(cls.name)
            if not norm:
                raise ModelError(f"class name {cls.name!r} has no letters or digits")
            if norm in seen:
                raise ModelError(
                    f"duplicate class name {cls.name!r} (clashes with {seen[norm]!r})")
            seen[norm] = cls.name
        names = {cls.name for cls in self.classes}
        wholes: dict[str, set[str]] = {}
        for assoc in self.associations:
            for end in (assoc.whole, assoc.part):
                if end not in names:
                    raise ModelError(f"association references unknown class {end!r}")
            if assoc.kind == "aggregation":
                if assoc.whole == assoc.part:
                    raise ModelError(f"class {assoc.part!r} aggregated into itself")
                wholes.setdefault(assoc.part, set()).add(assoc.whole)
        _check_acyclic(wholes)

    def class_named(self, name: str) -> UmlClass:
        for cls in self.classes:
            if cls.name == name:
                return cls
        raise KeyError(name)

    def canonical(self) -> BusinessComponent:
        return BusinessComponent(
            self.name,
            sorted(self.classes, key=lambda c: c.name),
            sorted(set(self.associations), key=lambda a: a.sort_key),
        )


def _check_acyclic(edges: dict[str, set[str]]):
    state: dict[str, int] = {}

    def visit(node):
        state[node] = 1
        for nxt in sorted(edges.get(node, ())):
            mark = state.get(nxt, 0)
            if mark == 1:
                raise ModelError(f"aggregation cycle through {nxt!r}")
            if mark == 0:
                visit(nxt)
        state[node] = 2

    for node in sorted(edges):
        if state.get(node, 0) == 0:
            visit(node)


@dataclass(frozen=True)
class Correspondence:
    """Outcome of comparing one cross-component concept pair."""

    left: str
    right: str
    similarity: float
    verdict: str  # synonym | homonym | unrelated
    produced_by: str  # syntactic | domain-relation | case1 | case2 | case3

    def __post_init__(self):
        if not 0.0 <= self.similarity <= 1.0:
            raise ModelError(f"similarity {self.similarity} outside [0, 1]")
        if self.verdict not in ("synonym", "homonym", "unrelated"):
            raise ModelError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "homonym" and self.similarity != 0:
            raise ModelError("a homonym verdict requires similarity 0")

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.left, self.right))
