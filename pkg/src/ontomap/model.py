"""In-memory ontology representation: entities, axioms, metrics, lexicon.

An :class:`Ontology` is an immutable value holding entity declarations and a
deduplicated, ordered list of axioms.  Class expressions are restricted to
named classes and flat unions; this is all the bundled domain model needs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Union

LOCAL_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
PREFIX_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_.-]*)?\Z")

DATATYPES = ("xsd:string", "xsd:integer", "xsd:decimal", "xsd:boolean")


class OntologyError(Exception):
    """Base class for ontology construction errors."""


class UndeclaredEntity(OntologyError):
    """An axiom references a name that was never declared."""


class KindMismatch(OntologyError):
    """An entity is used in a position requiring a different kind."""


class EntityKind(Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    DATA_PROPERTY = "DataProperty"
    INDIVIDUAL = "NamedIndividual"


class Characteristic(Enum):
    SYMMETRIC = "Symmetric"
    ASYMMETRIC = "Asymmetric"
    TRANSITIVE = "Transitive"
    IRREFLEXIVE = "Irreflexive"
    FUNCTIONAL = "Functional"
    INVERSE_FUNCTIONAL = "InverseFunctional"


@dataclass(frozen=True, order=True)
class Name:
    """A prefixed entity name such as ``:Obesity`` or ``ex:Diet``."""

    prefix: str
    local: str

    def __post_init__(self):
        if not LOCAL_NAME_RE.match(self.local):
            raise OntologyError(f"invalid local name: {self.local!r}")
        if not PREFIX_RE.match(self.prefix):
            raise OntologyError(f"invalid prefix: {self.prefix!r}")

    def __str__(self):
        return f"{self.prefix}:{self.local}"


@dataclass(frozen=True)
class UnionOf:
    """A flat union of at least two distinct named classes."""

    members: tuple[Name, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if len(members) < 2:
            raise OntologyError("UnionOf needs at least two distinct classes")
        object.__setattr__(self, "members", members)


ClassExpr = Union[Name, UnionOf]


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = "xsd:string"

    def __post_init__(self):
        if self.datatype not in DATATYPES:
            raise OntologyError(f"unsupported datatype: {self.datatype}")


# --- axioms -----------------------------------------------------------------


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpr
    sup: ClassExpr


@dataclass(frozen=True)
class EquivalentClasses:
    a: ClassExpr
    b: ClassExpr

    def __post_init__(self):
        # order of the two expressions carries no meaning; normalize
        a, b = sorted((self.a, self.b), key=_expr_key)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class DisjointClasses:
    classes: tuple[Name, ...]

    def __post_init__(self):
        classes = tuple(sorted(set(self.classes)))
        if len(classes) < 2:
            raise OntologyError("DisjointClasses needs at least two classes")
        object.__setattr__(self, "classes", classes)


@dataclass(frozen=True)
class DisjointUnion:
    whole: Name
    parts: tuple[Name, ...]

    def __post_init__(self):
        parts = tuple(sorted(set(self.parts)))
        if len(parts) < 2:
            raise OntologyError("DisjointUnion needs at least two parts")
        object.__setattr__(self, "parts", parts)


@dataclass(frozen=True)
class ObjectPropertyDomain:
    prop: Name
    cls: ClassExpr


@dataclass(frozen=True)
class ObjectPropertyRange:
    prop: Name
    cls: ClassExpr


@dataclass(frozen=True)
class DataPropertyDomain:
    prop: Name
    cls: ClassExpr


@dataclass(frozen=True)
class DataPropertyRange:
    prop: Name
    datatype: str

    def __post_init__(self):
        if self.datatype not in DATATYPES:
            raise OntologyError(f"unsupported datatype: {self.datatype}")


@dataclass(frozen=True)
class SubObjectPropertyOf:
    sub: Name
    sup: Name


@dataclass(frozen=True)
class InverseObjectProperties:
    a: Name
    b: Name

    def __post_init__(self):
        a, b = sorted((self.a, self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class PropertyCharacteristic:
    prop: Name
    characteristic: Characteristic


@dataclass(frozen=True)
class ClassAssertion:
    cls: ClassExpr
    individual: Name


@dataclass(frozen=True)
class ObjectPropertyAssertion:
    prop: Name
    subject: Name
    object: Name


@dataclass(frozen=True)
class DataPropertyAssertion:
    prop: Name
    subject: Name
    value: Literal


@dataclass(frozen=True)
class Label:
    entity: Name
    text: str


Axiom = Union[
    SubClassOf,
    EquivalentClasses,
    DisjointClasses,
    DisjointUnion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    DataPropertyDomain,
    DataPropertyRange,
    SubObjectPropertyOf,
    InverseObjectProperties,
    PropertyCharacteristic,
    ClassAssertion,
    ObjectPropertyAssertion,
    DataPropertyAssertion,
    Label,
]


def _expr_key(expr: ClassExpr):
    if isinstance(expr, Name):
        return (0, (expr,))
    return (1, expr.members)


def _expr_names(expr: ClassExpr) -> tuple[Name, ...]:
    if isinstance(expr, Name):
        return (expr,)
    return expr.members


def axiom_signature(ax: Axiom) -> list[tuple[Name, Optional[EntityKind]]]:
    """Referenced names and the entity kind each position requires.

    ``None`` means any declared kind is acceptable (annotation subjects).
    """
    C, OP, DP, I = (
        EntityKind.CLASS,
        EntityKind.OBJECT_PROPERTY,
        EntityKind.DATA_PROPERTY,
        EntityKind.INDIVIDUAL,
    )
    if isinstance(ax, SubClassOf):
        return [(n, C) for n in _expr_names(ax.sub) + _expr_names(ax.sup)]
    if isinstance(ax, EquivalentClasses):
        return [(n, C) for n in _expr_names(ax.a) + _expr_names(ax.b)]
    if isinstance(ax, DisjointClasses):
        return [(n, C) for n in ax.classes]
    if isinstance(ax, DisjointUnion):
        return [(ax.whole, C)] + [(n, C) for n in ax.parts]
    if isinstance(ax, (ObjectPropertyDomain, ObjectPropertyRange)):
        return [(ax.prop, OP)] + [(n, C) for n in _expr_names(ax.cls)]
    if isinstance(ax, DataPropertyDomain):
        return [(ax.prop, DP)] + [(n, C) for n in _expr_names(ax.cls)]
    if isinstance(ax, DataPropertyRange):
        return [(ax.prop, DP)]
    if isinstance(ax, SubObjectPropertyOf):
        return [(ax.sub, OP), (ax.sup, OP)]
    if isinstance(ax, InverseObjectProperties):
        return [(ax.a, OP), (ax.b, OP)]
    if isinstance(ax, PropertyCharacteristic):
        return [(ax.prop, OP)]
    if isinstance(ax, ClassAssertion):
        return [(n, C) for n in _expr_names(ax.cls)] + [(ax.individual, I)]
    if isinstance(ax, ObjectPropertyAssertion):
        return [(ax.prop, OP), (ax.subject, I), (ax.object, I)]
    if isinstance(ax, DataPropertyAssertion):
        return [(ax.prop, DP), (ax.subject, I)]
    if isinstance(ax, Label):
        return [(ax.entity, None)]
    raise TypeError(f"not an axiom: {ax!r}")


@dataclass(frozen=True, eq=False)
class Ontology:
    """Immutable ontology value.

    ``declarations`` is a set of (name, kind) pairs; a name may be declared
    under more than one kind (class/individual punning), which the bundled
    domain model relies on for class-valued relation targets.  ``prefixes``
    is serialization metadata and does not take part in equality.
    """

    ontology_id: str = ""
    declarations: frozenset = frozenset()
    axioms: tuple = ()
    prefixes: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.ontology_id == other.ontology_id
            and self.declarations == other.declarations
            and set(self.axioms) == set(other.axioms)
        )

    def __hash__(self):
        return hash((self.ontology_id, self.declarations, frozenset(self.axioms)))

    # -- declaration helpers --

    def kinds_of(self, name: Name) -> frozenset:
        return frozenset(k for (n, k) in self.declarations if n == name)

    def is_declared(self, name: Name, kind: Optional[EntityKind] = None) -> bool:
        if kind is None:
            return any(n == name for (n, _) in self.declarations)
        return (name, kind) in self.declarations

    def names_of_kind(self, kind: EntityKind) -> set:
        return {n for (n, k) in self.declarations if k == kind}

    def declare(self, name: Name, kind: EntityKind) -> "Ontology":
        return replace(self, declarations=self.declarations | {(name, kind)})

    # -- annotation helpers --

    def labels(self) -> dict:
        out: dict[Name, list[str]] = {}
        for ax in self.axioms:
            if isinstance(ax, Label):
                out.setdefault(ax.entity, []).append(ax.text)
        return {n: tuple(ts) for n, ts in out.items()}

    def label_of(self, name: Name) -> Optional[str]:
        for ax in self.axioms:
            if isinstance(ax, Label) and ax.entity == name:
                return ax.text
        return None


def check_axiom(o: Ontology, ax: Axiom) -> None:
    """Raise :class:`UndeclaredEntity` / :class:`KindMismatch` when ``ax``
    references names the ontology does not declare appropriately."""
    for name, kind in axiom_signature(ax):
        kinds = o.kinds_of(name)
        if not kinds:
            raise UndeclaredEntity(f"{name} is not declared")
        if kind is not None and kind not in kinds:
            raise KindMismatch(f"{name} is not declared as {kind.value}")


def add_axiom(o: Ontology, ax: Axiom) -> Ontology:
    """Return an ontology containing ``ax`` exactly once."""
    check_axiom(o, ax)
    if ax in set(o.axioms):
        return o
    return replace(o, axioms=o.axioms + (ax,))


# --- metrics ----------------------------------------------------------------

AXIOM_TYPE_NAMES = (
    "SubClassOf",
    "EquivalentClasses",
    "DisjointClasses",
    "DisjointUnion",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "DataPropertyDomain",
    "DataPropertyRange",
    "SubObjectPropertyOf",
    "InverseObjectProperties",
    "SymmetricObjectProperty",
    "AsymmetricObjectProperty",
    "TransitiveObjectProperty",
    "IrreflexiveObjectProperty",
    "FunctionalObjectProperty",
    "InverseFunctionalObjectProperty",
    "ClassAssertion",
    "ObjectPropertyAssertion",
    "DataPropertyAssertion",
)


def axiom_type_name(ax: Axiom) -> str:
    if isinstance(ax, PropertyCharacteristic):
        return f"{ax.characteristic.value}ObjectProperty"
    if isinstance(ax, Label):
        return "AnnotationAssertion"
    return type(ax).__name__


@dataclass(frozen=True)
class MetricsReport:
    axiom_count: int
    logical_axiom_count: int
    declaration_count: int
    annotation_count: int
    class_count: int
    object_property_count: int
    data_property_count: int
    individual_count: int
    expressivity: str
    axiom_type_counts: tuple  # ((type name, count), ...) in AXIOM_TYPE_NAMES order

    def as_dict(self) -> dict:
        d = {
            "Axiom": self.axiom_count,
            "Logical axiom count": self.logical_axiom_count,
            "Declaration axioms count": self.declaration_count,
            "Annotation axiom count": self.annotation_count,
            "Class count": self.class_count,
            "Object property count": self.object_property_count,
            "Data property count": self.data_property_count,
            "Individual count": self.individual_count,
            "DL expressivity": self.expressivity,
        }
        d.update(dict(self.axiom_type_counts))
        return d


def compute_metrics(o: Ontology) -> MetricsReport:
    """Count declarations, logical axioms and annotations in a single pass."""
    per_type = {name: 0 for name in AXIOM_TYPE_NAMES}
    annotations = 0
    for ax in o.axioms:
        if isinstance(ax, Label):
            annotations += 1
        else:
            per_type[axiom_type_name(ax)] += 1
    logical = sum(per_type.values())
    declarations = len(o.declarations)
    return MetricsReport(
        axiom_count=logical + declarations + annotations,
        logical_axiom_count=logical,
        declaration_count=declarations,
        annotation_count=annotations,
        class_count=len(o.names_of_kind(EntityKind.CLASS)),
        object_property_count=len(o.names_of_kind(EntityKind.OBJECT_PROPERTY)),
        data_property_count=len(o.names_of_kind(EntityKind.DATA_PROPERTY)),
        individual_count=len(o.names_of_kind(EntityKind.INDIVIDUAL)),
        expressivity=detect_expressivity(o),
        axiom_type_counts=tuple((name, per_type[name]) for name in AXIOM_TYPE_NAMES),
    )


def detect_expressivity(o: Ontology) -> str:
    """Best-effort constructor-letter summary (heuristic, documentation only).

    Baseline ``S``; ``R`` for role axioms (irreflexivity, asymmetry, property
    hierarchies), ``I`` for inverses, ``F`` for (inverse-)functionality,
    ``(D)`` when data properties are declared.  Nominals are unsupported, so
    ``O`` is never emitted.
    """
    has_r = has_i = has_f = False
    for ax in o.axioms:
        if isinstance(ax, PropertyCharacteristic):
            if ax.characteristic in (Characteristic.IRREFLEXIVE, Characteristic.ASYMMETRIC):
                has_r = True
            if ax.characteristic in (Characteristic.FUNCTIONAL, Characteristic.INVERSE_FUNCTIONAL):
                has_f = True
        elif isinstance(ax, SubObjectPropertyOf):
            has_r = True
        elif isinstance(ax, InverseObjectProperties):
            has_i = True
    s = "S"
    if has_r:
        s += "R"
    if has_i:
        s += "I"
    if has_f:
        s += "F"
    if o.names_of_kind(EntityKind.DATA_PROPERTY):
        s += "(D)"
    return s


# --- concept lexicon --------------------------------------------------------

_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[0-9]+|[A-Z]+")
_WORD_RE = re.compile(r"[a-z0-9]+")


def split_camel(local: str) -> list:
    """``Low-CalorieDiet`` -> ``['low', 'calorie', 'diet']``."""
    return [m.lower() for m in _CAMEL_RE.findall(local)]


def build_lexicon(o: Ontology, stopwords: Iterable[str] = ()) -> dict:
    """Map each class/individual to its lowercase label tokens.

    Tokens come from the camel-case-split local name plus the words of every
    ``rdfs:label``.  Entities whose token set empties out are omitted.
    """
    stop = set(stopwords)
    labels = o.labels()
    lexicon = {}
    keys = o.names_of_kind(EntityKind.CLASS) | o.names_of_kind(EntityKind.INDIVIDUAL)
    for name in sorted(keys):
        tokens = set(split_camel(name.local))
        for text in labels.get(name, ()):
            tokens.update(_WORD_RE.findall(text.lower()))
        tokens = frozenset(t for t in tokens if t and t not in stop)
        if tokens:
            lexicon[name] = tokens
    return lexicon
