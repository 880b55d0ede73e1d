"""Derivation of new synonymy relations for the domain ontology.

Three cases are tried in order for a pair of concepts that the domain
ontology does not relate:

* case1: some component already declares the two terms synonymous or
  equivalent; the relation is copied into the domain.
* case2: each concept has an equivalent neighbour and the two neighbours are
  already similar (nearby equivalent concepts are similar).
* case3: both concepts are composite and their child sets match one-to-one
  through similar pairs (concepts with similar children are similar).

:func:`closure_oracle` applies the same cases exhaustively to a fixpoint and
is used to check the incremental path.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .context import AlignmentContext, EnrichmentRecord
from .model import SIMILARITY_KINDS, ModelError, Ontology, RelationKind, SemanticRelation

logger = logging.getLogger(__name__)

CASES = ("case1", "case2", "case3")
DEFAULT_ORACLE_ITERATIONS = 1000


@dataclass
class EnrichmentOutcome:
    added: tuple[SemanticRelation, ...] = ()
    fired_case: str | None = None
    trace: list[str] = field(default_factory=list)

    def __bool__(self):
        return bool(self.added)


def _label(ctx: AlignmentContext, cid: str) -> str:
    return f"{ctx.concept(cid).term.raw} [{cid}]"


def _mapped_pair(ctx, c1, c2):
    d1, d2 = ctx.map_to_domain(c1), ctx.map_to_domain(c2)
    if d1 is None or d2 is None or d1 == d2:
        return None
    return d1, d2


def _similar(ctx: AlignmentContext, x: str, y: str) -> str | None:
    """Reason why ``x`` and ``y`` already count as similar, if they do.

    Equal terms count unless the domain declares the two homonymous.
    """
    dx, dy = ctx.map_to_domain(x), ctx.map_to_domain(y)
    between = set()
    if dx is not None and dy is not None and dx != dy:
        between = {r.kind for r in ctx.domain.relations_between(dx, dy)}
    if ctx.concept(x).normalized == ctx.concept(y).normalized:
        if RelationKind.HOMONYMY not in between or between & SIMILARITY_KINDS:
            return "same term"
    if dx is None or dy is None:
        return None
    if dx == dy:
        return "same domain concept"
    for kind in sorted(between & SIMILARITY_KINDS):
        return f"domain {kind.value}"
    return None


def _synonymy(d1, d2, case, note):
    return SemanticRelation(RelationKind.SYNONYMY, d1, d2, provenance=case, note=note)


def try_case1(ctx: AlignmentContext, c1: str, c2: str) -> EnrichmentOutcome:
    pair = _mapped_pair(ctx, c1, c2)
    if pair is None:
        return EnrichmentOutcome()
    t1, t2 = ctx.concept(c1).normalized, ctx.concept(c2).normalized
    for onto in ctx.components:
        for r in onto.relations:
            if r.kind not in SIMILARITY_KINDS:
                continue
            ta, tb = onto.concept(r.a).normalized, onto.concept(r.b).normalized
            if {ta, tb} == {t1, t2}:
                note = f"{r.kind.value} declared in {onto.name}"
                return EnrichmentOutcome(
                    (_synonymy(*pair, "case1", note),), "case1",
                    [f"{onto.name} declares {r}", f"copied as synonymy({pair[0]}, {pair[1]})"])
    return EnrichmentOutcome()


def equivalent_neighbours(ctx: AlignmentContext, cid: str) -> list[tuple[str, str]]:
    """Concepts declared synonymous/equivalent to ``cid`` or to a same-term
    concept, as ``(neighbour_id, where)`` pairs."""
    out = []
    d = ctx.map_to_domain(cid)
    if d is not None:
        for r in ctx.domain.relations_of(d):
            if r.kind in SIMILARITY_KINDS:
                out.append((r.other(d), ctx.domain.name))
    term = ctx.concept(cid).normalized
    for onto in ctx.components:
        for x in sorted(onto.concepts_by_normalized_term(term)):
            for r in onto.relations_of(x):
                if r.kind in SIMILARITY_KINDS:
                    out.append((r.other(x), onto.name))
    return out


def try_case2(ctx: AlignmentContext, c1: str, c2: str) -> EnrichmentOutcome:
    pair = _mapped_pair(ctx, c1, c2)
    if pair is None:
        return EnrichmentOutcome()
    for n1, where1 in equivalent_neighbours(ctx, c1):
        for n2, where2 in equivalent_neighbours(ctx, c2):
            reason = _similar(ctx, n1, n2)
            if reason is None:
                continue
            trace = [
                f"{_label(ctx, c1)} is equivalent to {_label(ctx, n1)} in {where1}",
                f"{_label(ctx, c2)} is equivalent to {_label(ctx, n2)} in {where2}",
                f"the two neighbours are similar ({reason})",
            ]
            note = f"neighbours {n1} ~ {n2}"
            return EnrichmentOutcome((_synonymy(*pair, "case2", note),), "case2", trace)
    return EnrichmentOutcome()


def _children(ctx: AlignmentContext, cid: str) -> tuple[list[str], bool]:
    """Child set used by case3 and whether recursion into it is allowed."""
    onto = ctx.owner(cid)
    kids = onto.children_of(cid)
    if kids or onto is ctx.domain:
        return sorted(kids), onto is not ctx.domain
    d = ctx.map_to_domain(cid)
    if d is None:
        return [], False
    return sorted(ctx.domain.children_of(d)), False


def _perfect_matching(left, right, edges):
    graph = nx.Graph()
    graph.add_nodes_from(("L", x) for x in left)
    graph.add_nodes_from(("R", y) for y in right)
    graph.add_edges_from((("L", x), ("R", y)) for x, y in edges)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=[("L", x) for x in left])
    pairs = sorted((x, matching[("L", x)][1]) for x in left if ("L", x) in matching)
    return pairs if len(pairs) == len(left) else None


def try_case3(ctx: AlignmentContext, c1: str, c2: str) -> EnrichmentOutcome:
    pair = _mapped_pair(ctx, c1, c2)
    if pair is None:
        return EnrichmentOutcome()
    kids1, deep1 = _children(ctx, c1)
    kids2, deep2 = _children(ctx, c2)
    if not kids1 or not kids2 or len(kids1) != len(kids2):
        return EnrichmentOutcome()

    reasons: dict[tuple[str, str], str] = {}
    for x in kids1:
        for y in kids2:
            reason = _similar(ctx, x, y)
            if reason is not None:
                reasons[x, y] = reason
    matching = _perfect_matching(kids1, kids2, reasons)

    if matching is None and deep1 and deep2 and ctx.depth < ctx.max_depth:
        for x in kids1:
            for y in kids2:
                if (x, y) in reasons:
                    continue
                ctx.depth += 1
                try:
                    sub = enrich_pair(ctx, x, y)
                finally:
                    ctx.depth -= 1
                if sub.added:
                    reasons[x, y] = f"derived by {sub.fired_case}"
        matching = _perfect_matching(kids1, kids2, reasons)

    if matching is None:
        return EnrichmentOutcome()
    names1 = ", ".join(ctx.concept(k).term.raw for k in kids1)
    names2 = ", ".join(ctx.concept(k).term.raw for k in kids2)
    trace = [f"{_label(ctx, c1)} has children {{{names1}}}",
             f"{_label(ctx, c2)} has children {{{names2}}}"]
    trace += [f"{ctx.concept(x).term.raw} ~ {ctx.concept(y).term.raw} ({reasons[x, y]})"
              for x, y in matching]
    note = "children matched: " + "; ".join(
        f"{ctx.concept(x).term.raw} ~ {ctx.concept(y).term.raw}" for x, y in matching)
    return EnrichmentOutcome((_synonymy(*pair, "case3", note),), "case3", trace)


def enrich_pair(ctx: AlignmentContext, c1: str, c2: str) -> EnrichmentOutcome:
    """Try case1, case2, case3 in order and inject the first derivation.

    A pair is examined at most once per session; later calls return an
    empty outcome.
    """
    if c2 < c1:
        c1, c2 = c2, c1
    key = frozenset((c1, c2))
    if key in ctx.visited_pairs:
        return EnrichmentOutcome(trace=["pair already examined in this session"])
    pair = _mapped_pair(ctx, c1, c2)
    if pair is None or ctx.domain.relations_between(*pair):
        return EnrichmentOutcome()
    ctx.visited_pairs.add(key)
    ctx.enrich_calls += 1
    for attempt in (try_case1, try_case2, try_case3):
        outcome = attempt(ctx, c1, c2)
        if outcome.added:
            break
    else:
        return EnrichmentOutcome()
    for relation in outcome.added:
        if ctx.add_domain_relation(relation):
            ctx.enrichment_log.append(
                EnrichmentRecord((c1, c2), relation, outcome.fired_case, list(outcome.trace)))
            logger.debug("enrichment %s added %s", outcome.fired_case, relation)
    return outcome


def closure_oracle(domain: Ontology, components: Sequence[Ontology],
                   max_iterations: int = DEFAULT_ORACLE_ITERATIONS) -> Ontology:
    """Saturate ``domain`` under the three cases, ignoring order and the
    visited guard.

    Every concept pair over the components and the domain is re-examined each
    round against the state of the previous round until no round adds a
    relation. Child matchings are found by enumerating permutations, so
    child sets must stay small. Returns a new ontology.
    """
    saturated = domain.copy()
    view = AlignmentContext(saturated, components, enrichment_enabled=False)
    refs = sorted(c.id for onto in [saturated, *components] for c in onto)
    onto_of = {c.id: onto for onto in [saturated, *components] for c in onto}
    term = {r: onto_of[r].concept(r).normalized for r in refs}
    mapped = {r: view.map_to_domain(r) for r in refs}

    def children(r):
        kids = onto_of[r].children_of(r)
        if kids or onto_of[r] is saturated or mapped[r] is None:
            return sorted(kids)
        return sorted(saturated.children_of(mapped[r]))

    kids_of = {r: children(r) for r in refs}
    by_term: dict[str, list[str]] = {}
    for r in refs:
        if onto_of[r] is not saturated:
            by_term.setdefault(term[r], []).append(r)
    local_pairs = set()
    for onto in components:
        for rel in onto.relations:
            if rel.kind in SIMILARITY_KINDS:
                local_pairs.add(frozenset((term[rel.a], term[rel.b])))

    homonymous = {frozenset((rel.a, rel.b)) for rel in saturated.relations
                  if rel.kind is RelationKind.HOMONYMY}

    for _ in range(max_iterations):
        similar_domain = {frozenset((rel.a, rel.b)) for rel in saturated.relations
                          if rel.kind in SIMILARITY_KINDS}

        def similar(x, y):
            dx, dy = mapped[x], mapped[y]
            if dx is None or dy is None:
                return term[x] == term[y]
            linked = frozenset((dx, dy))
            if dx == dy or linked in similar_domain:
                return True
            return term[x] == term[y] and linked not in homonymous

        def neighbours(r):
            found = []
            if mapped[r] is not None:
                found += [next(iter(p - {mapped[r]})) for p in similar_domain if mapped[r] in p]
            for x in by_term.get(term[r], ()):
                for rel in onto_of[x].relations_of(x):
                    if rel.kind in SIMILARITY_KINDS:
                        found.append(rel.other(x))
            return found

        fresh: dict[frozenset, SemanticRelation] = {}
        for x, y in itertools.combinations(refs, 2):
            dx, dy = mapped[x], mapped[y]
            if dx is None or dy is None or dx == dy:
                continue
            key = frozenset((dx, dy))
            if key in fresh or saturated.relations_between(dx, dy):
                continue
            case = None
            if frozenset((term[x], term[y])) in local_pairs:
                case = "case1"
            elif any(similar(n1, n2) for n1 in neighbours(x) for n2 in neighbours(y)):
                case = "case2"
            else:
                k1, k2 = kids_of[x], kids_of[y]
                if k1 and len(k1) == len(k2) and any(
                        all(similar(a, b) for a, b in zip(k1, perm))
                        for perm in itertools.permutations(k2)):
                    case = "case3"
            if case is not None:
                fresh[key] = SemanticRelation(RelationKind.SYNONYMY, dx, dy, provenance=case)
        if not fresh:
            return saturated
        for rel in fresh.values():
            saturated.add_relation(rel)
    raise ModelError(f"closure did not reach a fixpoint within {max_iterations} rounds")
