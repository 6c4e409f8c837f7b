"""Executable AI-ethics ontology: axiom store, forward-chaining reasoner,
pattern queries, ingestion pipeline, metrics, and knowledge-graph export."""

from .errors import (
    AieoError,
    DuplicateFramework,
    InsufficientFrameworks,
    IterationLimitExceeded,
    KindConflict,
    KindMismatch,
    MissingArgument,
    ParseDiagnostic,
    ParseError,
    SchemaViolation,
    UnconfirmedProposal,
    UndeclaredEntity,
    UnknownAnnotationProperty,
    UnknownConcept,
    UnknownFact,
    UnknownFramework,
    UnknownKind,
    UnsupportedFeature,
    ValidationError,
)
from .jsonio import (
    axiom_from_obj,
    axiom_to_obj,
    parse_config,
    parse_framework_document,
    store_from_json,
    store_to_json,
    traces_to_json,
)
from .kgexport import (
    DetailLevel,
    GraphDoc,
    GraphEdge,
    GraphNode,
    export_graph,
    render_dot,
    render_json,
)
from .model import (
    AnnotationAssertion,
    AnnotationValue,
    Axiom,
    ClassAssertion,
    Declaration,
    DisjointClasses,
    EntityKind,
    EquivalentClasses,
    EquivalentObjectProperties,
    Iri,
    MetricsReport,
    ObjectPropertyAssertion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    OntologyStore,
    SameIndividual,
    SubClassOf,
    SubObjectPropertyOf,
    compute_metrics,
    sorted_axioms,
)
from .pipeline import (
    ClassificationMap,
    ConceptDeclaration,
    EquivalenceProposal,
    ExtractionConfig,
    FrameworkDocument,
    IterationRecord,
    PipelineConfig,
    Section,
    apply_equivalences,
    attach_keywords,
    concept_iri,
    detect_saturation,
    enrich,
    extract_keywords,
    ingested_frameworks,
    is_ingested,
    keyword_iri,
    label_similarity,
    propose_equivalences,
    run_iteration,
    structure_framework,
)
from .query import (
    CANNED_QUERY_NAMES,
    PRINCIPLES_BY_FRAMEWORK_QUERY,
    SCENARIOS_FOR_QUERY_TEMPLATE,
    Query,
    ResultSet,
    TriplePattern,
    Variable,
    canned_query,
    evaluate,
    parse_query,
    triples_view,
)
from .reasoner import (
    ConsistencyViolation,
    InferenceTrace,
    Materialization,
    RuleId,
    check_consistency,
    equivalence_classes,
    explain,
    materialize,
)
from .schema import AIEO_NS, DEFAULT_PREFIXES, aieo, seed_schema
from .turtle import axiom_line, parse_turtle, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "AIEO_NS",
    "AieoError",
    "AnnotationAssertion",
    "AnnotationValue",
    "Axiom",
    "CANNED_QUERY_NAMES",
    "ClassAssertion",
    "ClassificationMap",
    "ConceptDeclaration",
    "ConsistencyViolation",
    "DEFAULT_PREFIXES",
    "Declaration",
    "DetailLevel",
    "DisjointClasses",
    "DuplicateFramework",
    "EntityKind",
    "EquivalenceProposal",
    "EquivalentClasses",
    "EquivalentObjectProperties",
    "ExtractionConfig",
    "FrameworkDocument",
    "GraphDoc",
    "GraphEdge",
    "GraphNode",
    "InferenceTrace",
    "InsufficientFrameworks",
    "Iri",
    "IterationLimitExceeded",
    "IterationRecord",
    "KindConflict",
    "KindMismatch",
    "Materialization",
    "MetricsReport",
    "MissingArgument",
    "ObjectPropertyAssertion",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "OntologyStore",
    "PRINCIPLES_BY_FRAMEWORK_QUERY",
    "ParseDiagnostic",
    "ParseError",
    "PipelineConfig",
    "Query",
    "ResultSet",
    "RuleId",
    "SCENARIOS_FOR_QUERY_TEMPLATE",
    "SameIndividual",
    "SchemaViolation",
    "Section",
    "SubClassOf",
    "SubObjectPropertyOf",
    "TriplePattern",
    "UnconfirmedProposal",
    "UndeclaredEntity",
    "UnknownAnnotationProperty",
    "UnknownConcept",
    "UnknownFact",
    "UnknownFramework",
    "UnknownKind",
    "UnsupportedFeature",
    "ValidationError",
    "Variable",
    "aieo",
    "apply_equivalences",
    "attach_keywords",
    "axiom_from_obj",
    "axiom_line",
    "axiom_to_obj",
    "canned_query",
    "check_consistency",
    "compute_metrics",
    "concept_iri",
    "detect_saturation",
    "enrich",
    "equivalence_classes",
    "evaluate",
    "explain",
    "export_graph",
    "extract_keywords",
    "ingested_frameworks",
    "is_ingested",
    "keyword_iri",
    "label_similarity",
    "materialize",
    "parse_config",
    "parse_framework_document",
    "parse_query",
    "parse_turtle",
    "propose_equivalences",
    "render_dot",
    "render_json",
    "run_iteration",
    "seed_schema",
    "serialize_turtle",
    "sorted_axioms",
    "store_from_json",
    "store_to_json",
    "structure_framework",
    "traces_to_json",
    "triples_view",
]
