"""Semantic integration of business components through ontology alignment."""

from .alignment import AlignmentResult, ConflictReport, align_ontologies, build_conflict_report, merge_result
from .context import AlignmentContext
from .enrichment import EnrichmentOutcome, closure_oracle, enrich_pair, try_case1, try_case2, try_case3
from .formats import (
    FormatError,
    emit_owl_functional,
    parse_component_document,
    parse_ontology_document,
    serialize_component_document,
    serialize_ontology_document,
)
from .model import (
    Attribute,
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
from .similarity import semantic_similarity, syntactic_similarity
from .transform import MergePlan, bc_to_ontology, build_merge_plan, ontology_to_bc

__version__ = "0.1.0"
