"""JSON forms: store interchange, framework documents, pipeline configs.

The interchange document is ``{"prefixes": {...}, "axioms": [...]}`` with
one object per axiom whose ``kind`` field names the variant. IRIs are
emitted absolute; on input, CURIEs are resolved against the document's own
prefixes (falling back to the standard map).
"""

from __future__ import annotations

import json
from typing import Any, Callable

from .errors import ParseDiagnostic, ParseError, SchemaViolation
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
    ObjectPropertyAssertion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    OntologyStore,
    SameIndividual,
    SubClassOf,
    SubObjectPropertyOf,
    sorted_axioms,
)
from .pipeline import (
    ClassificationMap,
    ConceptDeclaration,
    ExtractionConfig,
    FrameworkDocument,
    PipelineConfig,
    Section,
)
from .reasoner import Materialization
from .schema import DEFAULT_PREFIXES, aieo


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError([ParseDiagnostic(exc.lineno, exc.colno, exc.msg)]) from None


def _resolver(prefixes: dict[str, str]) -> Callable[[str, str], Iri]:
    table = dict(DEFAULT_PREFIXES)
    table.update(prefixes)

    def resolve(name: str, path: str) -> Iri:
        if not isinstance(name, str) or not name:
            raise SchemaViolation(path, "expected a non-empty IRI string")
        if ":" in name:
            prefix, local = name.split(":", 1)
            base = table.get(prefix)
            if base is not None and not local.startswith("//"):
                return Iri(base + local)
            return Iri(name)
        return aieo(name)

    return resolve


def _expect_obj(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaViolation(path, "expected a JSON object")
    return value


def _field(obj: dict, name: str, typ: type, path: str, default: Any = ...) -> Any:
    if name not in obj:
        if default is ...:
            raise SchemaViolation(f"{path}.{name}", "required field is missing")
        return default
    value = obj[name]
    if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
        raise SchemaViolation(f"{path}.{name}", f"expected {typ.__name__}")
    return value


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise SchemaViolation(f"{path}.{key}", "unknown field")


# ---------------------------------------------------------------------------
# Store interchange
# ---------------------------------------------------------------------------

_ENTITY_KIND_VALUES = {k.value: k for k in EntityKind}


def axiom_to_obj(ax: Axiom) -> dict:
    if isinstance(ax, Declaration):
        return {"kind": "Declaration", "iri": str(ax.iri), "entityKind": ax.kind.value}
    if isinstance(ax, SubClassOf):
        return {"kind": "SubClassOf", "sub": str(ax.sub), "sup": str(ax.sup)}
    if isinstance(ax, EquivalentClasses):
        return {"kind": "EquivalentClasses", "classes": sorted(map(str, ax.classes))}
    if isinstance(ax, DisjointClasses):
        return {"kind": "DisjointClasses", "a": str(ax.a), "b": str(ax.b)}
    if isinstance(ax, SubObjectPropertyOf):
        return {"kind": "SubObjectPropertyOf", "sub": str(ax.sub), "sup": str(ax.sup)}
    if isinstance(ax, EquivalentObjectProperties):
        return {
            "kind": "EquivalentObjectProperties",
            "properties": sorted(map(str, ax.properties)),
        }
    if isinstance(ax, ObjectPropertyRange):
        return {"kind": "ObjectPropertyRange", "prop": str(ax.prop), "cls": str(ax.cls)}
    if isinstance(ax, ObjectPropertyDomain):
        return {"kind": "ObjectPropertyDomain", "prop": str(ax.prop), "cls": str(ax.cls)}
    if isinstance(ax, ClassAssertion):
        return {"kind": "ClassAssertion", "cls": str(ax.cls), "ind": str(ax.ind)}
    if isinstance(ax, ObjectPropertyAssertion):
        return {
            "kind": "ObjectPropertyAssertion",
            "subject": str(ax.subject),
            "prop": str(ax.prop),
            "object": str(ax.object),
        }
    if isinstance(ax, SameIndividual):
        return {"kind": "SameIndividual", "a": str(ax.a), "b": str(ax.b)}
    if isinstance(ax, AnnotationAssertion):
        value: dict = {"text": ax.value.text}
        if ax.value.language_tag:
            value["languageTag"] = ax.value.language_tag
        return {
            "kind": "AnnotationAssertion",
            "subject": str(ax.subject),
            "annProp": str(ax.prop),
            "value": value,
        }
    raise TypeError(f"unknown axiom type {type(ax).__name__}")


def axiom_from_obj(obj: dict, resolve: Callable[[str, str], Iri], path: str) -> Axiom:
    _expect_obj(obj, path)
    kind = _field(obj, "kind", str, path)

    def iri(name: str) -> Iri:
        return resolve(_field(obj, name, str, path), f"{path}.{name}")

    def iri_list(name: str) -> frozenset[Iri]:
        raw = _field(obj, name, list, path)
        return frozenset(
            resolve(item, f"{path}.{name}[{i}]") for i, item in enumerate(raw)
        )

    try:
        if kind == "Declaration":
            entity_kind = _field(obj, "entityKind", str, path)
            if entity_kind not in _ENTITY_KIND_VALUES:
                raise SchemaViolation(
                    f"{path}.entityKind",
                    f"expected one of {sorted(_ENTITY_KIND_VALUES)}",
                )
            _reject_unknown(obj, {"kind", "iri", "entityKind"}, path)
            return Declaration(iri("iri"), _ENTITY_KIND_VALUES[entity_kind])
        if kind == "SubClassOf":
            _reject_unknown(obj, {"kind", "sub", "sup"}, path)
            return SubClassOf(iri("sub"), iri("sup"))
        if kind == "EquivalentClasses":
            _reject_unknown(obj, {"kind", "classes"}, path)
            return EquivalentClasses(iri_list("classes"))
        if kind == "DisjointClasses":
            _reject_unknown(obj, {"kind", "a", "b"}, path)
            return DisjointClasses(iri("a"), iri("b"))
        if kind == "SubObjectPropertyOf":
            _reject_unknown(obj, {"kind", "sub", "sup"}, path)
            return SubObjectPropertyOf(iri("sub"), iri("sup"))
        if kind == "EquivalentObjectProperties":
            _reject_unknown(obj, {"kind", "properties"}, path)
            return EquivalentObjectProperties(iri_list("properties"))
        if kind == "ObjectPropertyRange":
            _reject_unknown(obj, {"kind", "prop", "cls"}, path)
            return ObjectPropertyRange(iri("prop"), iri("cls"))
        if kind == "ObjectPropertyDomain":
            _reject_unknown(obj, {"kind", "prop", "cls"}, path)
            return ObjectPropertyDomain(iri("prop"), iri("cls"))
        if kind == "ClassAssertion":
            _reject_unknown(obj, {"kind", "cls", "ind"}, path)
            return ClassAssertion(iri("cls"), iri("ind"))
        if kind == "ObjectPropertyAssertion":
            _reject_unknown(obj, {"kind", "subject", "prop", "object"}, path)
            return ObjectPropertyAssertion(iri("subject"), iri("prop"), iri("object"))
        if kind == "SameIndividual":
            _reject_unknown(obj, {"kind", "a", "b"}, path)
            return SameIndividual(iri("a"), iri("b"))
        if kind == "AnnotationAssertion":
            _reject_unknown(obj, {"kind", "subject", "annProp", "value"}, path)
            value = _expect_obj(_field(obj, "value", dict, path), f"{path}.value")
            _reject_unknown(value, {"text", "languageTag"}, f"{path}.value")
            return AnnotationAssertion(
                iri("subject"),
                resolve(_field(obj, "annProp", str, path), f"{path}.annProp"),
                AnnotationValue(
                    _field(value, "text", str, f"{path}.value"),
                    _field(value, "languageTag", str, f"{path}.value", None),
                ),
            )
    except ValueError as exc:
        raise SchemaViolation(path, str(exc)) from None
    raise SchemaViolation(f"{path}.kind", f"unknown axiom kind {kind!r}")


def store_to_json(store: OntologyStore) -> str:
    doc = {
        "prefixes": dict(sorted(store.prefixes.items())),
        "axioms": [axiom_to_obj(ax) for ax in sorted_axioms(store.axioms)],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def store_from_json(text: str) -> OntologyStore:
    doc = _expect_obj(_loads(text), "$")
    _reject_unknown(doc, {"prefixes", "axioms"}, "$")
    prefixes = _field(doc, "prefixes", dict, "$", {})
    for prefix, base in prefixes.items():
        if not isinstance(base, str) or not base:
            raise SchemaViolation(f"$.prefixes.{prefix}", "expected a non-empty string")
    resolve = _resolver(prefixes)
    raw_axioms = _field(doc, "axioms", list, "$", [])
    axioms = [
        axiom_from_obj(obj, resolve, f"$.axioms[{i}]")
        for i, obj in enumerate(raw_axioms)
    ]
    store = OntologyStore(prefixes)
    for ax in axioms:  # declarations first; file order must not matter
        if isinstance(ax, Declaration):
            store.declare(ax.iri, ax.kind)
    for ax in axioms:
        if not isinstance(ax, Declaration):
            store.add(ax)
    return store


# ---------------------------------------------------------------------------
# Framework documents
# ---------------------------------------------------------------------------

def framework_document_from_obj(obj: dict, path: str = "$") -> FrameworkDocument:
    _expect_obj(obj, path)
    _reject_unknown(
        obj, {"id", "title", "sections", "conceptDeclarations"}, path
    )
    resolve = _resolver({})
    doc_id = resolve(_field(obj, "id", str, path), f"{path}.id")
    title = _field(obj, "title", str, path)
    sections = []
    for i, raw in enumerate(_field(obj, "sections", list, path, [])):
        spath = f"{path}.sections[{i}]"
        _expect_obj(raw, spath)
        _reject_unknown(raw, {"heading", "body"}, spath)
        sections.append(
            Section(_field(raw, "heading", str, spath), _field(raw, "body", str, spath))
        )
    concepts = []
    for i, raw in enumerate(_field(obj, "conceptDeclarations", list, path, [])):
        cpath = f"{path}.conceptDeclarations[{i}]"
        _expect_obj(raw, cpath)
        _reject_unknown(
            raw, {"name", "kind", "shortDescription", "reference"}, cpath
        )
        try:
            concepts.append(
                ConceptDeclaration(
                    name=_field(raw, "name", str, cpath),
                    kind=_field(raw, "kind", str, cpath),
                    short_description=_field(raw, "shortDescription", str, cpath, None),
                    reference=_field(raw, "reference", str, cpath, None),
                )
            )
        except ValueError as exc:
            raise SchemaViolation(cpath, str(exc)) from None
    try:
        return FrameworkDocument(doc_id, title, tuple(sections), tuple(concepts))
    except ValueError as exc:
        raise SchemaViolation(f"{path}.conceptDeclarations", str(exc)) from None


def parse_framework_document(text: str) -> FrameworkDocument:
    return framework_document_from_obj(_loads(text))


# ---------------------------------------------------------------------------
# Pipeline configuration
# ---------------------------------------------------------------------------

def parse_config(text: str) -> PipelineConfig:
    """Parse a pipeline config; every field is optional and defaulted."""
    obj = _expect_obj(_loads(text), "$")
    _reject_unknown(
        obj,
        {"extraction", "classificationMap", "confirmations", "threshold", "framework"},
        "$",
    )
    resolve = _resolver({})

    extraction = ExtractionConfig()
    if "extraction" in obj:
        raw = _expect_obj(obj["extraction"], "$.extraction")
        _reject_unknown(
            raw, {"stopwords", "minTokenLength", "topK", "relevantTopK"}, "$.extraction"
        )
        kwargs: dict = {}
        if "stopwords" in raw:
            words = _field(raw, "stopwords", list, "$.extraction")
            for i, w in enumerate(words):
                if not isinstance(w, str):
                    raise SchemaViolation(f"$.extraction.stopwords[{i}]", "expected string")
            kwargs["stopwords"] = frozenset(w.lower() for w in words)
        if "minTokenLength" in raw:
            kwargs["min_token_length"] = _field(raw, "minTokenLength", int, "$.extraction")
        if "topK" in raw:
            kwargs["top_k"] = _field(raw, "topK", int, "$.extraction")
        if "relevantTopK" in raw:
            kwargs["relevant_top_k"] = _field(raw, "relevantTopK", int, "$.extraction")
        try:
            extraction = ExtractionConfig(**kwargs)
        except ValueError as exc:
            raise SchemaViolation("$.extraction", str(exc)) from None

    classification = ClassificationMap()
    if "classificationMap" in obj:
        raw = _expect_obj(obj["classificationMap"], "$.classificationMap")
        entries = {}
        for keyword, target in raw.items():
            if not isinstance(target, str):
                raise SchemaViolation(f"$.classificationMap.{keyword}", "expected string")
            entries[keyword] = resolve(target, f"$.classificationMap.{keyword}")
        try:
            classification = ClassificationMap(entries)
        except ValueError as exc:
            raise SchemaViolation("$.classificationMap", str(exc)) from None

    confirmations = []
    for i, raw in enumerate(_field(obj, "confirmations", list, "$", [])):
        cpath = f"$.confirmations[{i}]"
        _expect_obj(raw, cpath)
        _reject_unknown(raw, {"left", "right"}, cpath)
        left = resolve(_field(raw, "left", str, cpath), f"{cpath}.left")
        right = resolve(_field(raw, "right", str, cpath), f"{cpath}.right")
        if left == right:
            raise SchemaViolation(cpath, "left and right must differ")
        confirmations.append(frozenset((left, right)))

    threshold = obj.get("threshold", 0.5)
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise SchemaViolation("$.threshold", "expected a number")

    framework = None
    if "framework" in obj:
        framework = framework_document_from_obj(obj["framework"], "$.framework")

    try:
        return PipelineConfig(
            extraction=extraction,
            classification=classification,
            confirmations=tuple(confirmations),
            threshold=float(threshold),
            framework=framework,
        )
    except ValueError as exc:
        raise SchemaViolation("$.threshold", str(exc)) from None


# ---------------------------------------------------------------------------
# Reasoner trace sidecar
# ---------------------------------------------------------------------------

def traces_to_json(mat: Materialization) -> str:
    """Every inferred fact with all of its one-step derivations."""
    entries = []
    for fact in sorted_axioms(mat.inferred):
        entries.append(
            {
                "conclusion": axiom_to_obj(fact),
                "traces": [
                    {
                        "rule": trace.rule.value,
                        "premises": [axiom_to_obj(p) for p in trace.premises],
                    }
                    for trace in mat.traces[fact]
                ],
            }
        )
    return json.dumps(entries, indent=2, sort_keys=True) + "\n"
