"""Pairwise alignment of component ontologies over a domain ontology.

Produces the correspondences, the merged result ontology, the enriched
domain ontology and a report of name conflicts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .context import DEFAULT_MAX_DEPTH, DEFAULT_THRESHOLD, AlignmentContext
from .model import (
    Correspondence,
    ModelError,
    Ontology,
    RelationKind,
    SemanticRelation,
)
from .similarity import evaluate_pair

logger = logging.getLogger(__name__)

RESULT_ONTOLOGY_NAME = "OBCr"


class AlignmentError(ModelError):
    pass


@dataclass
class ConflictEntry:
    left: str
    right: str
    left_term: str
    right_term: str
    similarity: float
    produced_by: str
    evidence: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "leftTerm": self.left_term,
            "rightTerm": self.right_term,
            "similarity": self.similarity,
            "producedBy": self.produced_by,
            "evidence": list(self.evidence),
        }


@dataclass
class ConflictReport:
    synonym_conflicts: list[ConflictEntry] = field(default_factory=list)
    homonym_conflicts: list[ConflictEntry] = field(default_factory=list)
    unresolved: list[ConflictEntry] = field(default_factory=list)
    enrichments: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "synonymConflicts": [e.to_dict() for e in self.synonym_conflicts],
            "homonymConflicts": [e.to_dict() for e in self.homonym_conflicts],
            "unresolved": [e.to_dict() for e in self.unresolved],
            "enrichments": list(self.enrichments),
        }


@dataclass
class AlignmentResult:
    correspondences: list[Correspondence]
    result_ontology: Ontology
    enriched_domain: Ontology
    report: ConflictReport
    context: AlignmentContext

    def correspondence(self, a: str, b: str) -> Correspondence | None:
        key = frozenset((a, b))
        for corr in self.correspondences:
            if corr.pair == key:
                return corr
        return None


def _verdict(ctx, evaluation, c1, c2) -> str:
    same_term = ctx.concept(c1).normalized == ctx.concept(c2).normalized
    if same_term and evaluation.score == 0:
        return "homonym"
    if evaluation.score >= ctx.threshold:
        return "synonym"
    return "unrelated"


def correspond(ctx: AlignmentContext, c1: str, c2: str) -> Correspondence:
    evaluation = evaluate_pair(ctx, c1, c2)
    return Correspondence(c1, c2, evaluation.score, _verdict(ctx, evaluation, c1, c2),
                          evaluation.produced_by)


def align_ontologies(domain: Ontology, components: Sequence[Ontology],
                     threshold: float = DEFAULT_THRESHOLD,
                     max_depth: int = DEFAULT_MAX_DEPTH,
                     enrichment_enabled: bool = True,
                     result_name: str = RESULT_ONTOLOGY_NAME) -> AlignmentResult:
    """Align every cross-component concept pair in one shared session.

    Pairs within one component are never compared. Pairs are visited in
    component order, then by concept id, so enrichments found early are
    available to later pairs. ``domain`` itself is not modified.
    """
    if len(components) < 2:
        raise AlignmentError("alignment needs at least two component ontologies")
    if not 0.0 < threshold <= 1.0:
        raise AlignmentError(f"threshold {threshold} outside (0, 1]")
    ctx = AlignmentContext.for_session(domain, components, threshold=threshold,
                                       max_depth=max_depth,
                                       enrichment_enabled=enrichment_enabled)
    correspondences = []
    for i, left in enumerate(ctx.components):
        for right in ctx.components[i + 1:]:
            for c1 in sorted(c.id for c in left):
                for c2 in sorted(c.id for c in right):
                    correspondences.append(correspond(ctx, c1, c2))
    result = merge_result(ctx, correspondences, result_name)
    report = build_conflict_report(ctx, correspondences)
    return AlignmentResult(correspondences, result, ctx.domain, report, ctx)


def merge_result(ctx: AlignmentContext, correspondences: Sequence[Correspondence],
                 name: str = RESULT_ONTOLOGY_NAME) -> Ontology:
    """Disjoint union of the component ontologies plus one equivalence per
    synonym correspondence."""
    verdicts: dict[frozenset, str] = {}
    for corr in correspondences:
        previous = verdicts.setdefault(corr.pair, corr.verdict)
        if {previous, corr.verdict} == {"synonym", "homonym"}:
            raise AlignmentError(
                f"pair {corr.left} / {corr.right} is both synonym and homonym")
    result = Ontology(name)
    for onto in ctx.components:
        for concept in onto:
            result.add_concept(concept)
    for onto in ctx.components:
        for rel in onto.relations:
            if rel.kind is RelationKind.PART_OF:
                result.add_relation(rel)
        for source, target, label in onto.associations:
            result.add_association(source, target, label)
    for corr in correspondences:
        if corr.verdict == "synonym":
            result.add_relation(SemanticRelation(
                RelationKind.EQUIVALENCE, corr.left, corr.right, note=corr.produced_by))
    return result


def _evidence(ctx: AlignmentContext, corr: Correspondence) -> list[str]:
    d1, d2 = ctx.map_to_domain(corr.left), ctx.map_to_domain(corr.right)
    if d1 is None or d2 is None:
        return ["not both present in the domain ontology; syntactic comparison"]
    if d1 == d2:
        return [f"both name domain concept {d1}"]
    key = frozenset((d1, d2))
    for record in ctx.enrichment_log:
        if frozenset((record.relation.a, record.relation.b)) == key:
            return [*record.trace, f"added {record.relation} ({record.case})"]
    relations = sorted(ctx.domain.relations_between(d1, d2), key=lambda r: r.key)
    if relations:
        return [f"domain declares {r}" for r in relations]
    return ["no domain relation; syntactic comparison"]


def build_conflict_report(ctx: AlignmentContext,
                          correspondences: Sequence[Correspondence]) -> ConflictReport:
    """Sort correspondences into synonym, homonym and unresolved conflicts.

    Equal-term pairs merged as the same concept are not conflicts. An
    equal-term pair that is not merged is a homonym conflict; a different-term
    pair with a fractional score below the threshold is unresolved.
    """
    report = ConflictReport()
    for corr in correspondences:
        left, right = ctx.concept(corr.left), ctx.concept(corr.right)
        same_term = left.normalized == right.normalized
        entry = ConflictEntry(corr.left, corr.right, left.term.raw, right.term.raw,
                              corr.similarity, corr.produced_by)
        if corr.verdict == "synonym" and not same_term:
            bucket = report.synonym_conflicts
        elif same_term and corr.verdict != "synonym":
            bucket = report.homonym_conflicts
        elif not same_term and 0 < corr.similarity < ctx.threshold:
            bucket = report.unresolved
        else:
            continue
        entry.evidence = _evidence(ctx, corr)
        bucket.append(entry)
    for bucket in (report.synonym_conflicts, report.homonym_conflicts, report.unresolved):
        bucket.sort(key=lambda e: (e.left, e.right))
    for record in ctx.enrichment_log:
        report.enrichments.append({
            "pair": list(record.pair),
            "relation": {"type": record.relation.kind.value,
                         "a": record.relation.a, "b": record.relation.b},
            "case": record.case,
            "trace": list(record.trace),
        })
    return report
