"""Syntactic and domain-backed semantic similarity between concepts."""

from __future__ import annotations

from dataclasses import dataclass

from .context import AlignmentContext
from .enrichment import enrich_pair
from .model import SIMILARITY_KINDS, Ontology, RelationKind, SemanticRelation, normalize_term

__all__ = [
    "normalize_term",
    "syntactic_similarity",
    "semantic_similarity",
    "evaluate_pair",
    "Evaluation",
]


def syntactic_similarity(ctx: AlignmentContext | None, o1: Ontology, c1: str,
                         o2: Ontology, c2: str) -> float:
    """Term equality for atomic concepts, best-match child average for
    composites.

    For composites with child sets of sizes m and k, each child is scored by
    its best match on the other side, the scores are summed and divided by
    max(m, k). Both orientations are computed and the smaller kept, which
    makes the measure symmetric. A composite compared with an atomic concept
    falls back to term equality. ``ctx`` is accepted for interface symmetry
    with :func:`semantic_similarity` and is not consulted.
    """
    o1.concept(c1)
    o2.concept(c2)
    return _syntactic(o1, c1, o2, c2, {})


def _syntactic(o1, c1, o2, c2, memo) -> float:
    key = (c1, c2)
    if key in memo:
        return memo[key]
    kids1 = sorted(o1.children_of(c1))
    kids2 = sorted(o2.children_of(c2))
    if kids1 and kids2:
        scores = [[_syntactic(o1, x, o2, y, memo) for y in kids2] for x in kids1]
        denom = max(len(kids1), len(kids2))
        forward = sum(max(row) for row in scores) / denom
        backward = sum(max(col) for col in zip(*scores)) / denom
        value = min(forward, backward)
    else:
        value = 1.0 if o1.concept(c1).normalized == o2.concept(c2).normalized else 0.0
    memo[key] = value
    return value


@dataclass(frozen=True)
class Evaluation:
    score: float
    produced_by: str
    relation: SemanticRelation | None = None


def _from_relations(relations) -> Evaluation | None:
    ordered = sorted(relations, key=lambda r: r.key)
    for r in ordered:
        if r.kind in SIMILARITY_KINDS:
            source = r.provenance if r.provenance != "input" else "domain-relation"
            return Evaluation(1.0, source, r)
    for r in ordered:
        if r.kind is RelationKind.HOMONYMY:
            return Evaluation(0.0, "domain-relation", r)
    return None


def evaluate_pair(ctx: AlignmentContext, c1: str, c2: str) -> Evaluation:
    """Semantic similarity of two session concepts, with its evidence."""
    if c2 < c1:
        c1, c2 = c2, c1
    o1, o2 = ctx.owner(c1), ctx.owner(c2)

    def syntactic():
        return Evaluation(_syntactic(o1, c1, o2, c2, {}), "syntactic")

    d1, d2 = ctx.map_to_domain(c1), ctx.map_to_domain(c2)
    if d1 is None or d2 is None:
        return syntactic()
    if d1 == d2:
        # both name the same domain concept
        return Evaluation(1.0, "syntactic")
    relations = ctx.domain.relations_between(d1, d2)
    if not relations and ctx.enrichment_enabled:
        outcome = enrich_pair(ctx, c1, c2)
        if outcome.added:
            relations = ctx.domain.relations_between(d1, d2)
    if not relations:
        return syntactic()
    found = _from_relations(relations)
    return found if found is not None else syntactic()


def semantic_similarity(ctx: AlignmentContext, o1: Ontology, c1: str,
                        o2: Ontology, c2: str) -> float:
    """Domain-ontology-backed similarity; may enrich ``ctx.domain``.

    Declared synonymy or equivalence in the domain gives 1, homonymy gives 0.
    When the domain holds no relation between the two mapped concepts the
    enrichment rules are tried once for the pair; if nothing is derived, or
    either concept is absent from the domain, the syntactic measure decides.
    """
    for onto, cid in ((o1, c1), (o2, c2)):
        if ctx.owner(cid) is not onto:
            raise KeyError(f"concept {cid!r} does not belong to ontology {onto.name!r}")
    return evaluate_pair(ctx, c1, c2).score
