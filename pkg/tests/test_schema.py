from __future__ import annotations

from aieo.model import (
    AnnotationAssertion,
    DisjointClasses,
    EquivalentClasses,
    EquivalentObjectProperties,
    ObjectPropertyRange,
    SubClassOf,
    SubObjectPropertyOf,
    compute_metrics,
)
from aieo.schema import DEFAULT_PREFIXES, aieo, seed_schema


def test_seed_entity_counts():
    report = compute_metrics(seed_schema())
    assert report.class_count == 19
    assert report.object_property_count == 10
    assert report.data_property_count == 0
    assert report.annotation_property_count == 4
    assert report.individual_count == 0


def test_seed_axiom_totals():
    report = compute_metrics(seed_schema())
    assert report.declaration_axiom_count == 33
    assert report.logical_axiom_count == 31
    assert report.axiom_count == 65


def test_seed_is_deterministic():
    assert seed_schema().axioms == seed_schema().axioms
    assert seed_schema().prefixes == dict(DEFAULT_PREFIXES)


def test_central_disjointness_is_nine_unordered_pairs():
    pairs = {
        (ax.a.local, ax.b.local)
        for ax in seed_schema().axioms_of(DisjointClasses)
    }
    assert pairs == {
        ("AI_Dimension", "Framework"),
        ("AI_Dimension", "FundamentalRight"),
        ("AI_Dimension", "Principle"),
        ("AI_Dimension", "Requirement"),
        ("Framework", "FundamentalRight"),
        ("Framework", "Principle"),
        ("Framework", "Requirement"),
        ("FundamentalRight", "Principle"),
        ("FundamentalRight", "Requirement"),
    }


def test_principle_and_requirement_are_not_disjoint():
    assert (
        DisjointClasses(aieo("Principle"), aieo("Requirement"))
        not in seed_schema().axioms
    )


def test_materialisation_classes_are_equivalent():
    sets = [ax.classes for ax in seed_schema().axioms_of(EquivalentClasses)]
    assert sets == [frozenset({aieo("Application"), aieo("Scenario"), aieo("UseCase")})]


def test_materialisation_properties_are_equivalent():
    sets = [ax.properties for ax in seed_schema().axioms_of(EquivalentObjectProperties)]
    assert sets == [
        frozenset({aieo("application"), aieo("scenario"), aieo("useCase")})
    ]


def test_keyword_hierarchy_has_nine_subclasses():
    subs = {
        ax.sub.local
        for ax in seed_schema().axioms_of(SubClassOf)
        if ax.sup == aieo("Keyword")
    }
    assert len(subs) == 9
    assert {"Risk_keyword", "Characteristic_keyword"} <= subs


def test_relevant_keyword_is_subproperty_of_keyword():
    assert SubObjectPropertyOf(aieo("relevantKeyword"), aieo("keyword")) in (
        seed_schema().axioms
    )


def test_every_object_property_has_a_range():
    store = seed_schema()
    ranged = {ax.prop for ax in store.axioms_of(ObjectPropertyRange)}
    props = {
        "application", "dimension", "example", "fundamentalRight", "keyword",
        "principle", "relevantKeyword", "requirement", "scenario", "useCase",
    }
    assert ranged == {aieo(p) for p in props}


def test_requirement_class_carries_plural_label_alias():
    labels = [
        ax
        for ax in seed_schema().axioms_of(AnnotationAssertion)
        if ax.subject == aieo("Requirement")
    ]
    assert [ax.value.text for ax in labels] == ["Requirements"]
