"""Entity and axiom data model, the axiom store, and ontology metrics.

The store keeps a duplicate-free set of axioms over declared entities.
Entities are plain absolute IRIs; CURIE resolution happens at the parsing
boundaries (see :mod:`aieo.turtle` and :mod:`aieo.jsonio`).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, fields
from enum import Enum
from typing import Iterable, Iterator

from .errors import KindConflict, KindMismatch, UndeclaredEntity, ValidationError


class Iri(str):
    """An absolute IRI. Behaves as a string; the subclass only marks intent."""

    __slots__ = ()

    def __new__(cls, value: str) -> "Iri":
        if not value:
            raise ValueError("IRI must be non-empty")
        return super().__new__(cls, value)

    @property
    def local(self) -> str:
        """The part after the last '#' or '/', used as a display fallback."""
        for sep in ("#", "/"):
            if sep in self:
                return self.rsplit(sep, 1)[1]
        return str(self)


class EntityKind(Enum):
    OWL_CLASS = "OwlClass"
    OBJECT_PROPERTY = "ObjectProperty"
    ANNOTATION_PROPERTY = "AnnotationProperty"
    DATA_PROPERTY = "DataProperty"
    NAMED_INDIVIDUAL = "NamedIndividual"


@dataclass(frozen=True, slots=True)
class AnnotationValue:
    """A plain or language-tagged literal."""

    text: str
    language_tag: str | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("annotation text must be non-empty")


# ---------------------------------------------------------------------------
# Axiom union
# ---------------------------------------------------------------------------

class Axiom:
    """Marker base for the tagged union of supported OWL constructs."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Declaration(Axiom):
    iri: Iri
    kind: EntityKind


@dataclass(frozen=True, slots=True)
class SubClassOf(Axiom):
    sub: Iri
    sup: Iri


@dataclass(frozen=True, slots=True)
class EquivalentClasses(Axiom):
    classes: frozenset[Iri]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", frozenset(self.classes))
        if len(self.classes) < 2:
            raise ValueError("EquivalentClasses needs at least two classes")


@dataclass(frozen=True, slots=True)
class DisjointClasses(Axiom):
    """Unordered pair, stored with a <= b."""

    a: Iri
    b: Iri

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("DisjointClasses needs two distinct classes")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)


@dataclass(frozen=True, slots=True)
class SubObjectPropertyOf(Axiom):
    sub: Iri
    sup: Iri


@dataclass(frozen=True, slots=True)
class EquivalentObjectProperties(Axiom):
    properties: frozenset[Iri]

    def __post_init__(self) -> None:
        object.__setattr__(self, "properties", frozenset(self.properties))
        if len(self.properties) < 2:
            raise ValueError("EquivalentObjectProperties needs at least two properties")


@dataclass(frozen=True, slots=True)
class ObjectPropertyRange(Axiom):
    prop: Iri
    cls: Iri


@dataclass(frozen=True, slots=True)
class ObjectPropertyDomain(Axiom):
    prop: Iri
    cls: Iri


@dataclass(frozen=True, slots=True)
class ClassAssertion(Axiom):
    cls: Iri
    ind: Iri


@dataclass(frozen=True, slots=True)
class ObjectPropertyAssertion(Axiom):
    subject: Iri
    prop: Iri
    object: Iri


@dataclass(frozen=True, slots=True)
class SameIndividual(Axiom):
    """Unordered pair, stored with a <= b."""

    a: Iri
    b: Iri

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError("SameIndividual needs two distinct individuals")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)


@dataclass(frozen=True, slots=True)
class AnnotationAssertion(Axiom):
    subject: Iri
    prop: Iri
    value: AnnotationValue


LOGICAL_AXIOM_TYPES = (
    SubClassOf,
    EquivalentClasses,
    DisjointClasses,
    SubObjectPropertyOf,
    EquivalentObjectProperties,
    ObjectPropertyRange,
    ObjectPropertyDomain,
    ClassAssertion,
    ObjectPropertyAssertion,
    SameIndividual,
)

# (attribute, required kind) per axiom type; None means "any declared kind".
_REFERENCE_KINDS: dict[type, tuple[tuple[str, EntityKind | None], ...]] = {
    SubClassOf: (("sub", EntityKind.OWL_CLASS), ("sup", EntityKind.OWL_CLASS)),
    DisjointClasses: (("a", EntityKind.OWL_CLASS), ("b", EntityKind.OWL_CLASS)),
    SubObjectPropertyOf: (
        ("sub", EntityKind.OBJECT_PROPERTY),
        ("sup", EntityKind.OBJECT_PROPERTY),
    ),
    ObjectPropertyRange: (
        ("prop", EntityKind.OBJECT_PROPERTY),
        ("cls", EntityKind.OWL_CLASS),
    ),
    ObjectPropertyDomain: (
        ("prop", EntityKind.OBJECT_PROPERTY),
        ("cls", EntityKind.OWL_CLASS),
    ),
    ClassAssertion: (
        ("cls", EntityKind.OWL_CLASS),
        ("ind", EntityKind.NAMED_INDIVIDUAL),
    ),
    ObjectPropertyAssertion: (
        ("subject", EntityKind.NAMED_INDIVIDUAL),
        ("prop", EntityKind.OBJECT_PROPERTY),
        ("object", EntityKind.NAMED_INDIVIDUAL),
    ),
    SameIndividual: (
        ("a", EntityKind.NAMED_INDIVIDUAL),
        ("b", EntityKind.NAMED_INDIVIDUAL),
    ),
    AnnotationAssertion: (
        ("subject", None),
        ("prop", EntityKind.ANNOTATION_PROPERTY),
    ),
}


def referenced_entities(ax: Axiom) -> list[tuple[Iri, EntityKind | None]]:
    """Every IRI a non-declaration axiom references, with its required kind."""
    if isinstance(ax, Declaration):
        return []
    if isinstance(ax, EquivalentClasses):
        return [(c, EntityKind.OWL_CLASS) for c in sorted(ax.classes)]
    if isinstance(ax, EquivalentObjectProperties):
        return [(p, EntityKind.OBJECT_PROPERTY) for p in sorted(ax.properties)]
    return [(getattr(ax, attr), kind) for attr, kind in _REFERENCE_KINDS[type(ax)]]


def axiom_subject(ax: Axiom) -> Iri:
    """The IRI an axiom is grouped under when serialized or indexed."""
    if isinstance(ax, Declaration):
        return ax.iri
    if isinstance(ax, (SubClassOf, SubObjectPropertyOf)):
        return ax.sub
    if isinstance(ax, EquivalentClasses):
        return min(ax.classes)
    if isinstance(ax, EquivalentObjectProperties):
        return min(ax.properties)
    if isinstance(ax, (DisjointClasses, SameIndividual)):
        return ax.a
    if isinstance(ax, (ObjectPropertyRange, ObjectPropertyDomain)):
        return ax.prop
    if isinstance(ax, ClassAssertion):
        return ax.ind
    if isinstance(ax, (ObjectPropertyAssertion, AnnotationAssertion)):
        return ax.subject
    raise TypeError(f"unknown axiom type {type(ax).__name__}")


def _axiom_sort_key(ax: Axiom) -> tuple:
    vals = []
    for f in fields(ax):
        v = getattr(ax, f.name)
        if isinstance(v, frozenset):
            vals.append(tuple(sorted(v)))
        elif isinstance(v, EntityKind):
            vals.append(v.value)
        elif isinstance(v, AnnotationValue):
            vals.append((v.text, v.language_tag or ""))
        else:
            vals.append(v)
    return (type(ax).__name__, tuple(vals))


def sorted_axioms(axioms: Iterable[Axiom]) -> list[Axiom]:
    """Deterministic total order over axioms, for output and diffing."""
    return sorted(axioms, key=_axiom_sort_key)


# ---------------------------------------------------------------------------
# Store
# ---------------------------------------------------------------------------

class OntologyStore:
    """Declared entities plus a normalized axiom set with derived indexes.

    Mutations are single-writer; hand a ``copy()`` to other threads of
    control for concurrent reads. Normalization folds overlapping
    EquivalentClasses / EquivalentObjectProperties axioms into one maximal
    set each, so equivalence is always stored as its connected component.
    """

    def __init__(self, prefixes: dict[str, str] | None = None):
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.axioms: set[Axiom] = set()
        self._kinds: dict[Iri, EntityKind] = {}
        self.by_subject: dict[Iri, set[Axiom]] = defaultdict(set)
        self.by_property: dict[Iri, set[Axiom]] = defaultdict(set)
        self.by_class: dict[Iri, set[Axiom]] = defaultdict(set)

    # -- mutation ----------------------------------------------------------

    def declare(self, iri: Iri, kind: EntityKind) -> "OntologyStore":
        """Add a Declaration axiom. Idempotent; punning is rejected."""
        iri = Iri(iri)
        existing = self._kinds.get(iri)
        if existing is not None and existing is not kind:
            raise KindConflict(
                f"{iri} already declared as {existing.value}, cannot redeclare as {kind.value}"
            )
        if existing is None:
            self._kinds[iri] = kind
            self._insert(Declaration(iri, kind))
        return self

    def add(self, ax: Axiom) -> "OntologyStore":
        """Add an axiom, checking that every referenced entity is declared
        with the kind its position requires."""
        if isinstance(ax, Declaration):
            return self.declare(ax.iri, ax.kind)
        for iri, required in referenced_entities(ax):
            actual = self._kinds.get(iri)
            if actual is None:
                raise UndeclaredEntity(f"{iri} is not declared")
            if required is not None and actual is not required:
                raise KindMismatch(
                    f"{iri} is declared as {actual.value}; "
                    f"{type(ax).__name__} requires {required.value}"
                )
        if isinstance(ax, EquivalentClasses):
            ax = self._merge_equivalence(ax, EquivalentClasses, "classes")
        elif isinstance(ax, EquivalentObjectProperties):
            ax = self._merge_equivalence(ax, EquivalentObjectProperties, "properties")
        self._insert(ax)
        return self

    def _merge_equivalence(self, ax: Axiom, typ: type, attr: str) -> Axiom:
        # Keep equivalence axioms maximal: union with any overlapping set.
        members = set(getattr(ax, attr))
        overlapping = [
            old for old in self.axioms
            if isinstance(old, typ) and getattr(old, attr) & members
        ]
        if not overlapping:
            return ax
        for old in overlapping:
            members |= getattr(old, attr)
            self._remove(old)
        return typ(frozenset(members))

    def _insert(self, ax: Axiom) -> None:
        if ax in self.axioms:
            return
        self.axioms.add(ax)
        self._index(ax, add=True)

    def _remove(self, ax: Axiom) -> None:
        self.axioms.discard(ax)
        self._index(ax, add=False)

    def _index(self, ax: Axiom, add: bool) -> None:
        def touch(index: dict[Iri, set[Axiom]], key: Iri) -> None:
            if add:
                index[key].add(ax)
            else:
                index[key].discard(ax)

        touch(self.by_subject, axiom_subject(ax))
        if isinstance(ax, (ObjectPropertyAssertion, AnnotationAssertion)):
            touch(self.by_property, ax.prop)
        elif isinstance(ax, (ObjectPropertyRange, ObjectPropertyDomain)):
            touch(self.by_property, ax.prop)
        elif isinstance(ax, SubObjectPropertyOf):
            touch(self.by_property, ax.sub)
            touch(self.by_property, ax.sup)
        elif isinstance(ax, EquivalentObjectProperties):
            for p in ax.properties:
                touch(self.by_property, p)
        if isinstance(ax, ClassAssertion):
            touch(self.by_class, ax.cls)
        elif isinstance(ax, SubClassOf):
            touch(self.by_class, ax.sub)
            touch(self.by_class, ax.sup)
        elif isinstance(ax, DisjointClasses):
            touch(self.by_class, ax.a)
            touch(self.by_class, ax.b)
        elif isinstance(ax, EquivalentClasses):
            for c in ax.classes:
                touch(self.by_class, c)
        elif isinstance(ax, (ObjectPropertyRange, ObjectPropertyDomain)):
            touch(self.by_class, ax.cls)

    # -- lookup ------------------------------------------------------------

    def kind_of(self, iri: Iri) -> EntityKind | None:
        return self._kinds.get(iri)

    def declared(self, kind: EntityKind | None = None) -> list[Iri]:
        """Declared IRIs, optionally restricted to one kind, sorted."""
        if kind is None:
            return sorted(self._kinds)
        return sorted(i for i, k in self._kinds.items() if k is kind)

    def axioms_of(self, *types: type) -> Iterator[Axiom]:
        return (ax for ax in self.axioms if isinstance(ax, types))

    # -- prefix handling ---------------------------------------------------

    def resolve(self, name: str) -> Iri:
        """Resolve a CURIE against the prefix map; absolute IRIs pass through."""
        if ":" in name:
            prefix, local = name.split(":", 1)
            base = self.prefixes.get(prefix)
            if base is not None and not local.startswith("//"):
                return Iri(base + local)
        return Iri(name)

    def compact(self, iri: Iri) -> str:
        """Shorten an IRI to a CURIE when a declared prefix covers it."""
        best: tuple[str, str] | None = None
        for prefix, base in self.prefixes.items():
            if iri.startswith(base) and (best is None or len(base) > len(best[1])):
                best = (prefix, base)
        if best is None:
            return str(iri)
        return f"{best[0]}:{iri[len(best[1]):]}"

    # -- bookkeeping -------------------------------------------------------

    def copy(self) -> "OntologyStore":
        dup = OntologyStore(self.prefixes)
        dup.axioms = set(self.axioms)
        dup._kinds = dict(self._kinds)
        dup.by_subject = defaultdict(set, {k: set(v) for k, v in self.by_subject.items()})
        dup.by_property = defaultdict(set, {k: set(v) for k, v in self.by_property.items()})
        dup.by_class = defaultdict(set, {k: set(v) for k, v in self.by_class.items()})
        return dup

    def rebuild_indexes(self) -> None:
        self.by_subject = defaultdict(set)
        self.by_property = defaultdict(set)
        self.by_class = defaultdict(set)
        self._kinds = {
            ax.iri: ax.kind for ax in self.axioms if isinstance(ax, Declaration)
        }
        for ax in self.axioms:
            self._index(ax, add=True)

    def validate(self) -> list[str]:
        """Full structural scan; returns human-readable problems (empty = ok)."""
        problems: list[str] = []
        declared_twice: dict[Iri, set[EntityKind]] = defaultdict(set)
        for ax in self.axioms_of(Declaration):
            declared_twice[ax.iri].add(ax.kind)
        for iri, kinds in declared_twice.items():
            if len(kinds) > 1:
                problems.append(f"{iri} declared with multiple kinds")
        for ax in self.axioms:
            for iri, required in referenced_entities(ax):
                actual = self._kinds.get(iri)
                if actual is None:
                    problems.append(f"{type(ax).__name__} references undeclared {iri}")
                elif required is not None and actual is not required:
                    problems.append(
                        f"{type(ax).__name__} needs {iri} to be {required.value}, "
                        f"found {actual.value}"
                    )
        return problems

    def require_valid(self) -> None:
        problems = self.validate()
        if problems:
            raise ValidationError("; ".join(problems))


def declare_entity(store: OntologyStore, iri: Iri, kind: EntityKind) -> OntologyStore:
    return store.declare(iri, kind)


def add_axiom(store: OntologyStore, ax: Axiom) -> OntologyStore:
    return store.add(ax)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class MetricsReport:
    """Ontology statistics in the style of an editor's summary panel.

    The total follows the convention
    ``axiom_count = logical + declaration + annotation assertions``;
    counts are over asserted axioms only, never inferred ones.
    """

    axiom_count: int
    logical_axiom_count: int
    declaration_axiom_count: int
    annotation_assertion_count: int
    class_count: int
    object_property_count: int
    data_property_count: int
    individual_count: int
    annotation_property_count: int

    TABLE_ROWS = (
        ("Axiom", "axiom_count"),
        ("Logical axioms count", "logical_axiom_count"),
        ("Declaration axioms count", "declaration_axiom_count"),
        ("Class count", "class_count"),
        ("Object property count", "object_property_count"),
        ("Data property count", "data_property_count"),
        ("Individual count", "individual_count"),
        ("Annotation property count", "annotation_property_count"),
    )

    def as_table(self) -> str:
        width = max(len(label) for label, _ in self.TABLE_ROWS)
        lines = [f"{'Metric'.ljust(width)}  Value"]
        for label, attr in self.TABLE_ROWS:
            lines.append(f"{label.ljust(width)}  {getattr(self, attr)}")
        return "\n".join(lines)

    def as_dict(self) -> dict[str, int]:
        return {
            "axiomCount": self.axiom_count,
            "logicalAxiomCount": self.logical_axiom_count,
            "declarationAxiomCount": self.declaration_axiom_count,
            "annotationAssertionCount": self.annotation_assertion_count,
            "classCount": self.class_count,
            "objectPropertyCount": self.object_property_count,
            "dataPropertyCount": self.data_property_count,
            "individualCount": self.individual_count,
            "annotationPropertyCount": self.annotation_property_count,
        }


def compute_metrics(store: OntologyStore) -> MetricsReport:
    declarations = sum(1 for _ in store.axioms_of(Declaration))
    annotations = sum(1 for _ in store.axioms_of(AnnotationAssertion))
    logical = sum(1 for _ in store.axioms_of(*LOGICAL_AXIOM_TYPES))
    return MetricsReport(
        axiom_count=len(store.axioms),
        logical_axiom_count=logical,
        declaration_axiom_count=declarations,
        annotation_assertion_count=annotations,
        class_count=len(store.declared(EntityKind.OWL_CLASS)),
        object_property_count=len(store.declared(EntityKind.OBJECT_PROPERTY)),
        data_property_count=len(store.declared(EntityKind.DATA_PROPERTY)),
        individual_count=len(store.declared(EntityKind.NAMED_INDIVIDUAL)),
        annotation_property_count=len(store.declared(EntityKind.ANNOTATION_PROPERTY)),
    )
