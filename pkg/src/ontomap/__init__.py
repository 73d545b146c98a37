"""Ontology toolkit: OWL functional-syntax parsing, rule-based reasoning,
concept-graph clustering, and ontology-constrained topic modelling."""

from .model import (
    Characteristic,
    ClassAssertion,
    DataPropertyAssertion,
    DataPropertyDomain,
    DataPropertyRange,
    DisjointClasses,
    DisjointUnion,
    EntityKind,
    EquivalentClasses,
    InverseObjectProperties,
    KindMismatch,
    Label,
    Literal,
    MetricsReport,
    Name,
    ObjectPropertyAssertion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    OntologyError,
    PropertyCharacteristic,
    SubClassOf,
    SubObjectPropertyOf,
    UndeclaredEntity,
    UnionOf,
    add_axiom,
    build_lexicon,
    compute_metrics,
    detect_expressivity,
    split_camel,
)
from .ofn import (
    ParseDiagnostic,
    ParseResult,
    SourceSpan,
    parse,
    parse_file,
    render_axiom,
    serialize,
)
from .reasoner import (
    Derivation,
    ExplanationNode,
    InferredStore,
    IsA,
    Rel,
    Sub,
    Taxonomy,
    UnknownFact,
    Violation,
    classify,
    explain,
    instances_of,
    saturate,
)
from .graphmap import (
    ConceptGraph,
    EmptyGraph,
    GraphEdge,
    GraphNode,
    Partition,
    PartitionMismatch,
    UnknownFormat,
    build_concept_graph,
    cluster,
    export,
    modularity,
)
from .corpus import (
    Corpus,
    DEFAULT_STOPWORDS,
    EmptyCorpus,
    IngestConfig,
    ingest_corpus,
    read_records,
    tokenize,
)
from .constraints import (
    ConstraintSet,
    constraints_from_json,
    constraints_to_json,
    derive_constraints,
)
from .forest import (
    ConflictingConstraints,
    DirichletForest,
    Region,
    TooManyCliques,
    build_forest,
    flat_forest,
    maximal_cliques,
)
from .gibbs import (
    ForestVocabMismatch,
    InvalidHyperparameter,
    TopicModelState,
    dflda_gibbs,
    lda_gibbs,
    log_likelihood,
    phi_matrix,
    sample_branch,
    tag_topics,
    top_words,
)

__version__ = "0.1.0"
