"""Mutable state of one alignment session."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .model import Concept, ModelError, Ontology, SemanticRelation

DEFAULT_THRESHOLD = 1.0
DEFAULT_MAX_DEPTH = 8


@dataclass
class EnrichmentRecord:
    pair: tuple[str, str]
    relation: SemanticRelation
    case: str
    trace: list[str]


@dataclass
class AlignmentContext:
    """Working copy of the domain ontology plus the component ontologies.

    Concept ids must be unique across the domain and every component, which
    holds by construction when ontology names differ. ``visited_pairs`` and
    ``domain.relations`` only ever grow.
    """

    domain: Ontology
    components: Sequence[Ontology]
    threshold: float = DEFAULT_THRESHOLD
    max_depth: int = DEFAULT_MAX_DEPTH
    enrichment_enabled: bool = True
    visited_pairs: set[frozenset[str]] = field(default_factory=set)
    enrichment_log: list[EnrichmentRecord] = field(default_factory=list)
    enrich_calls: int = 0
    depth: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ModelError(f"threshold {self.threshold} outside (0, 1]")
        if self.max_depth < 0:
            raise ModelError("max depth must be non-negative")
        self.components = list(self.components)
        self._owner: dict[str, Ontology] = {}
        names = set()
        for onto in [self.domain, *self.components]:
            if onto.name in names:
                raise ModelError(f"ontology name {onto.name!r} used twice in one session")
            names.add(onto.name)
            for c in onto:
                if c.id in self._owner:
                    raise ModelError(f"concept id {c.id!r} appears in two ontologies")
                self._owner[c.id] = onto
        self._mapping: dict[str, str | None] = {}

    @classmethod
    def for_session(cls, domain: Ontology, components: Sequence[Ontology], **kwargs):
        """Context over a private copy of ``domain``."""
        return cls(domain.copy(), components, **kwargs)

    @property
    def all_concepts(self) -> dict[str, Concept]:
        return {c.id: c for onto in self.components for c in onto}

    def owner(self, cid: str) -> Ontology:
        try:
            return self._owner[cid]
        except KeyError:
            raise KeyError(f"unknown concept id {cid!r}") from None

    def concept(self, cid: str) -> Concept:
        return self.owner(cid).concept(cid)

    def map_to_domain(self, cid: str) -> str | None:
        """Domain concept standing for ``cid``, or None when absent/ambiguous.

        A component concept maps to the unique domain concept with the same
        normalized term. Several candidates are narrowed to those sharing a
        ``partOf`` parent term with the component concept; anything other
        than exactly one survivor counts as absent.
        """
        onto = self.owner(cid)
        if onto is self.domain:
            return cid
        if cid in self._mapping:
            return self._mapping[cid]
        concept = onto.concept(cid)
        candidates = sorted(self.domain.concepts_by_normalized_term(concept.normalized))
        if len(candidates) > 1:
            parent_terms = {onto.concept(p).normalized for p in onto.parents_of(cid)}
            candidates = [
                d for d in candidates
                if parent_terms & {self.domain.concept(p).normalized
                                   for p in self.domain.parents_of(d)}
            ]
        mapped = candidates[0] if len(candidates) == 1 else None
        self._mapping[cid] = mapped
        return mapped

    def add_domain_relation(self, relation: SemanticRelation) -> bool:
        return self.domain.add_relation(relation)
