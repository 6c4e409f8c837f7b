"""Tests for the pattern query engine and the four canned queries."""

from collections import Counter

import pytest

from aieo.errors import MissingArgument, ParseError, UnknownConcept, UnsupportedFeature
from aieo.model import (
    AnnotationAssertion,
    AnnotationValue,
    ClassAssertion,
    EntityKind,
    Iri,
    ObjectPropertyAssertion,
    SameIndividual,
)
from aieo.query import (
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
from aieo.reasoner import materialize
from aieo.schema import (
    OWL_SAME_AS,
    RDF_TYPE,
    REFERENCE,
    SHORT_DESCRIPTION,
    aieo,
    seed_schema,
)

from oracles import brute_force_evaluate, flatten_triples, random_query, random_store

import random
import warnings


def _individuals(store, *names):
    for name in names:
        store.declare(aieo(name), EntityKind.NAMED_INDIVIDUAL)
    return store


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def test_parse_select_distinct_with_join():
    q = parse_query(PRINCIPLES_BY_FRAMEWORK_QUERY)
    assert q.distinct
    assert q.projected_variables == (Variable("framework"), Variable("principle"))
    assert q.patterns == (
        TriplePattern(Variable("framework"), RDF_TYPE, aieo("Framework")),
        TriplePattern(Variable("framework"), aieo("principle"), Variable("principle")),
    )


def test_parse_without_distinct():
    q = parse_query("SELECT ?x WHERE { ?x a aieo:Principle }")
    assert not q.distinct


def test_parse_full_iri_and_tagged_literal():
    q = parse_query(
        'SELECT ?s WHERE { ?s <https://w3id.org/aieo#label> "Fairness"@en }'
    )
    pattern = q.patterns[0]
    assert pattern.predicate == Iri("https://w3id.org/aieo#label")
    assert pattern.object == AnnotationValue("Fairness", "en")


def test_parse_string_escapes():
    q = parse_query('SELECT ?s WHERE { ?s aieo:reference "a\\"b\\nc" }')
    assert q.patterns[0].object == AnnotationValue('a"b\nc')


def test_parse_custom_prefixes():
    q = parse_query(
        "SELECT ?x WHERE { ?x a ex:Thing }", prefixes={"ex": "http://example.org/"}
    )
    assert q.patterns[0].object == Iri("http://example.org/Thing")


def test_parse_unknown_prefix_is_parse_error():
    with pytest.raises(ParseError, match="unknown prefix 'foaf:'"):
        parse_query("SELECT ?x WHERE { ?x a foaf:Person }")


def test_parse_error_carries_position():
    text = "SELECT ?x WHERE {\n  ?x == ?y\n}"
    with pytest.raises(ParseError) as exc:
        parse_query(text)
    diag = exc.value.diagnostics[0]
    assert (diag.line, diag.severity) == (2, "error")


@pytest.mark.parametrize(
    "keyword",
    ["OPTIONAL", "FILTER", "UNION", "GRAPH", "SERVICE", "PREFIX", "BASE",
     "ORDER", "GROUP", "LIMIT", "OFFSET", "MINUS", "BIND", "VALUES"],
)
def test_parse_rejects_out_of_subset_keywords(keyword):
    with pytest.raises(UnsupportedFeature, match="outside the query subset"):
        parse_query(f"SELECT ?x WHERE {{ ?x a aieo:Framework . {keyword} }}")


def test_parse_rejects_nested_group():
    with pytest.raises(UnsupportedFeature, match="nested groups"):
        parse_query("SELECT ?x WHERE { { ?x a aieo:Framework } }")


def test_parse_rejects_literal_subject():
    with pytest.raises(ParseError, match="literal cannot be a subject"):
        parse_query('SELECT ?x WHERE { "x" a ?x }')


def test_parse_rejects_unprojectable_variable():
    with pytest.raises(ParseError, match="occurs in no pattern"):
        parse_query("SELECT ?missing WHERE { ?x a aieo:Framework }")


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("ASK { ?x a aieo:Framework }", "unexpected token"),
        ("SELECT WHERE { ?x a aieo:Framework }", "at least one"),
        ("SELECT ?x { ?x a aieo:Framework }", "expected WHERE"),
        ("SELECT ?x WHERE ?x a aieo:Framework", "expected '{'"),
        ("SELECT ?x WHERE { ?x a aieo:Framework", "unterminated WHERE group"),
        ("SELECT ?x WHERE { }", "no patterns"),
        ("SELECT ?x WHERE { ?x a aieo:Framework } .", "trailing content"),
        ("SELECT ?x WHERE { ?x a aieo:Framework } extra", "unexpected token"),
        ("SELECT ? WHERE { ?x a aieo:Framework }", "empty variable name"),
        ('SELECT ?x WHERE { ?x a "" }', "empty literal"),
        ('SELECT ?x WHERE { ?x aieo:reference "open', "unterminated string"),
        ("SELECT ?x WHERE { ?x <no-close ?y }", "unterminated IRI"),
    ],
)
def test_parse_malformed_queries(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_query(text)


def test_disconnected_pattern_warns():
    with pytest.warns(UserWarning, match="cartesian product"):
        parse_query("SELECT ?x WHERE { ?x a aieo:Framework . ?y a aieo:Keyword }")


def test_query_rejects_unknown_projection_directly():
    with pytest.raises(ValueError, match="occurs in no pattern"):
        Query((Variable("y"),), (TriplePattern(Variable("x"), RDF_TYPE, aieo("Framework")),))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _mat(store):
    return materialize(store)


def test_type_pattern_binds_class_members():
    store = _individuals(seed_schema(), "fair", "just")
    store.add(ClassAssertion(aieo("Principle"), aieo("fair")))
    store.add(ClassAssertion(aieo("Principle"), aieo("just")))
    rs = evaluate(parse_query("SELECT ?p WHERE { ?p a aieo:Principle }"), _mat(store))
    assert rs.values("p") == [aieo("fair"), aieo("just")]


def test_join_across_two_patterns():
    store = _individuals(seed_schema(), "fw", "fair", "other")
    store.add(ClassAssertion(aieo("Framework"), aieo("fw")))
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("principle"), aieo("fair")))
    store.add(ObjectPropertyAssertion(aieo("other"), aieo("principle"), aieo("fair")))
    rs = evaluate(parse_query(PRINCIPLES_BY_FRAMEWORK_QUERY), _mat(store))
    assert rs.rows == (
        {Variable("framework"): aieo("fw"), Variable("principle"): aieo("fair")},
    )


def test_query_sees_inferred_facts():
    store = _individuals(seed_schema(), "fw", "fair")
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("principle"), aieo("fair")))
    rs = evaluate(parse_query("SELECT ?x WHERE { ?x a aieo:Principle }"), _mat(store))
    assert rs.values("x") == [aieo("fair")]  # typed by the range axiom


def test_symmetric_axioms_match_both_directions():
    store = _individuals(seed_schema(), "a", "b")
    store.add(SameIndividual(aieo("a"), aieo("b")))
    mat = _mat(store)
    forward = evaluate(
        parse_query("SELECT ?x WHERE { aieo:a owl:sameAs ?x }"), mat
    )
    backward = evaluate(
        parse_query("SELECT ?x WHERE { ?x owl:sameAs aieo:b }"), mat
    )
    assert forward.values("x") == [aieo("b")]
    assert backward.values("x") == [aieo("a")]


def test_meta_class_typing_lists_declared_classes():
    rs = evaluate(
        parse_query("SELECT ?c WHERE { ?c a owl:Class }"), _mat(seed_schema())
    )
    assert len(rs) == 19
    assert aieo("Framework") in rs.values("c")


def test_literal_object_pattern_matches_annotation():
    store = _individuals(seed_schema(), "fair")
    store.declare(aieo("note"), EntityKind.ANNOTATION_PROPERTY)
    store.add(AnnotationAssertion(aieo("fair"), aieo("note"), AnnotationValue("hi", "en")))
    store.add(AnnotationAssertion(aieo("fair"), aieo("note"), AnnotationValue("hi")))
    mat = _mat(store)
    tagged = evaluate(parse_query('SELECT ?s WHERE { ?s aieo:note "hi"@en }'), mat)
    plain = evaluate(parse_query('SELECT ?s WHERE { ?s aieo:note "hi" }'), mat)
    assert tagged.values("s") == [aieo("fair")]
    assert plain.values("s") == [aieo("fair")]


def test_distinct_collapses_duplicate_rows():
    store = _individuals(seed_schema(), "fw", "fair")
    store.add(ClassAssertion(aieo("Framework"), aieo("fw")))
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("principle"), aieo("fair")))
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("requirement"), aieo("fair")))
    mat = _mat(store)
    text = "SELECT {} ?fw WHERE {{ ?fw a aieo:Framework . ?fw ?p aieo:fair }}"
    plain = evaluate(parse_query(text.format("")), mat)
    distinct = evaluate(parse_query(text.format("DISTINCT")), mat)
    assert len(plain) > len(distinct) == 1


def test_rows_are_sorted():
    store = _individuals(seed_schema(), "z", "a", "m")
    for name in ("z", "a", "m"):
        store.add(ClassAssertion(aieo("Keyword"), aieo(name)))
    rs = evaluate(parse_query("SELECT ?k WHERE { ?k a aieo:Keyword }"), _mat(store))
    assert rs.values("k") == sorted(rs.values("k"))


def test_empty_result_keeps_header():
    rs = evaluate(
        parse_query("SELECT ?x WHERE { ?x a aieo:Framework }"), _mat(seed_schema())
    )
    assert rs.variables == (Variable("x"),)
    assert rs.rows == ()


def test_join_result_is_order_independent():
    store = _individuals(seed_schema(), "fw", "fair")
    store.add(ClassAssertion(aieo("Framework"), aieo("fw")))
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("principle"), aieo("fair")))
    mat = _mat(store)
    ab = "SELECT ?f ?p WHERE { ?f a aieo:Framework . ?f aieo:principle ?p }"
    ba = "SELECT ?f ?p WHERE { ?f aieo:principle ?p . ?f a aieo:Framework }"
    assert evaluate(parse_query(ab), mat) == evaluate(parse_query(ba), mat)


def _assertion_facts(mat):
    return {
        ax
        for ax in mat.facts()
        if isinstance(ax, (ClassAssertion, ObjectPropertyAssertion))
    }


def test_evaluation_matches_brute_force():
    for seed in range(20):
        store = random_store(seed)
        mat = materialize(store)
        triples = flatten_triples(store, _assertion_facts(mat))
        rng = random.Random(seed + 7000)
        for _ in range(3):
            patterns, projected, distinct = random_query(rng)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # random patterns may be disconnected
                query = Query(projected, patterns, (), distinct)
            got = evaluate(query, mat)
            want = brute_force_evaluate(patterns, projected, triples, distinct)
            got_keys = Counter(frozenset(row.items()) for row in got.rows)
            want_keys = Counter(frozenset(row) for row in want)
            assert got_keys == want_keys, (seed, query)


def test_evaluation_is_monotone_under_growth():
    store = _individuals(seed_schema(), "fw", "fair")
    store.add(ObjectPropertyAssertion(aieo("fw"), aieo("principle"), aieo("fair")))
    query = parse_query(PRINCIPLES_BY_FRAMEWORK_QUERY)
    before = {frozenset(r.items()) for r in evaluate(query, _mat(store)).rows}
    store.declare(aieo("fw2"), EntityKind.NAMED_INDIVIDUAL)
    store.add(ClassAssertion(aieo("Framework"), aieo("fw2")))
    after = {frozenset(r.items()) for r in evaluate(query, _mat(store)).rows}
    assert before <= after


def test_triples_view_has_no_duplicate_blowup():
    store = random_store(3)
    mat = materialize(store)
    triples = triples_view(mat)
    assert len(triples) == len(flatten_triples(store, _assertion_facts(mat)))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def test_tsv_rendering():
    rs = ResultSet(
        (Variable("a"), Variable("b")),
        ({Variable("a"): aieo("x"), Variable("b"): AnnotationValue("two\nlines")},),
    )
    assert rs.to_tsv() == (
        "?a\t?b\n"
        'https://w3id.org/aieo#x\t"two\\nlines"\n'
    )


def test_json_rendering():
    rs = ResultSet(
        (Variable("a"),),
        ({Variable("a"): AnnotationValue("hi", "en")},),
    )
    assert rs.to_json() == '[\n  {\n    "a": "\\"hi\\"@en"\n  }\n]\n'


# ---------------------------------------------------------------------------
# Canned queries
# ---------------------------------------------------------------------------


def _two_framework_store():
    store = _individuals(
        seed_schema(), "fw1", "fw2", "fair1", "fair2", "other"
    )
    store.add(ClassAssertion(aieo("Framework"), aieo("fw1")))
    store.add(ClassAssertion(aieo("Framework"), aieo("fw2")))
    store.add(ObjectPropertyAssertion(aieo("fw1"), aieo("principle"), aieo("fair1")))
    store.add(ObjectPropertyAssertion(aieo("fw2"), aieo("requirement"), aieo("fair2")))
    store.add(ObjectPropertyAssertion(aieo("fw1"), aieo("principle"), aieo("other")))
    store.add(SameIndividual(aieo("fair1"), aieo("fair2")))
    store.add(AnnotationAssertion(aieo("fair1"), SHORT_DESCRIPTION, AnnotationValue("be fair")))
    store.add(AnnotationAssertion(aieo("fair2"), REFERENCE, AnnotationValue("ch. 2")))
    return store


def test_canned_names_are_stable():
    assert CANNED_QUERY_NAMES == (
        "principles_by_framework",
        "describe_concept",
        "scenarios_for",
        "unique_concepts",
    )
    with pytest.raises(ValueError, match="unknown canned query"):
        canned_query("nope", _mat(seed_schema()))


def test_principles_by_framework_equals_its_query_text():
    for seed in (0, 4, 9):
        mat = materialize(random_store(seed))
        assert canned_query("principles_by_framework", mat) == evaluate(
            parse_query(PRINCIPLES_BY_FRAMEWORK_QUERY), mat
        )


def test_describe_concept_joins_annotations_from_both_frameworks():
    mat = _mat(_two_framework_store())
    rs = canned_query("describe_concept", mat, aieo("fair1"))
    assert rs.variables == tuple(
        Variable(v) for v in ("framework", "concept", "property", "value")
    )
    rows = {tuple(r[v] for v in rs.variables) for r in rs.rows}
    assert rows == {
        (aieo("fw1"), aieo("fair1"), SHORT_DESCRIPTION, AnnotationValue("be fair")),
        (aieo("fw2"), aieo("fair2"), REFERENCE, AnnotationValue("ch. 2")),
    }
    # the merged peer answers the same question
    assert canned_query("describe_concept", mat, aieo("fair2")) == rs


def test_describe_concept_without_merge_stays_local():
    store = _two_framework_store()
    unmerged = _individuals(seed_schema(), "fw1", "fair1")
    unmerged.add(ClassAssertion(aieo("Framework"), aieo("fw1")))
    unmerged.add(ObjectPropertyAssertion(aieo("fw1"), aieo("principle"), aieo("fair1")))
    unmerged.add(
        AnnotationAssertion(aieo("fair1"), SHORT_DESCRIPTION, AnnotationValue("be fair"))
    )
    rs = canned_query("describe_concept", _mat(unmerged), aieo("fair1"))
    assert [r[Variable("framework")] for r in rs.rows] == [aieo("fw1")]


def test_scenarios_for_equals_its_query_text_on_plain_stores():
    store = _individuals(seed_schema(), "fair", "hiring")
    store.add(ObjectPropertyAssertion(aieo("fair"), aieo("scenario"), aieo("hiring")))
    mat = _mat(store)
    text = SCENARIOS_FOR_QUERY_TEMPLATE.replace("{concept}", str(aieo("fair")))
    assert canned_query("scenarios_for", mat, aieo("fair")) == evaluate(
        parse_query(text), mat
    )


def test_scenarios_for_reaches_peers_and_equivalent_properties():
    store = _individuals(seed_schema(), "fair1", "fair2", "hiring", "loans")
    store.add(SameIndividual(aieo("fair1"), aieo("fair2")))
    store.add(ObjectPropertyAssertion(aieo("fair2"), aieo("useCase"), aieo("hiring")))
    store.add(ObjectPropertyAssertion(aieo("fair1"), aieo("application"), aieo("loans")))
    rs = canned_query("scenarios_for", _mat(store), aieo("fair1"))
    assert rs.variables == (Variable("scenario"),)
    assert rs.values("scenario") == [aieo("hiring"), aieo("loans")]


def test_unique_concepts_drops_shared_ones():
    mat = _mat(_two_framework_store())
    rs = canned_query("unique_concepts", mat, aieo("fw1"))
    assert rs.variables == (Variable("concept"),)
    assert rs.values("concept") == [aieo("other")]  # fair1 is shared with fw2
    assert canned_query("unique_concepts", mat, aieo("fw2")).values("concept") == []


def test_unique_concepts_keeps_unshared_merges():
    # a sameAs peer that no other framework links to does not disqualify
    store = _individuals(seed_schema(), "fw1", "fair1", "fair2")
    store.add(ClassAssertion(aieo("Framework"), aieo("fw1")))
    store.add(ObjectPropertyAssertion(aieo("fw1"), aieo("principle"), aieo("fair1")))
    store.add(SameIndividual(aieo("fair1"), aieo("fair2")))
    rs = canned_query("unique_concepts", _mat(store), aieo("fw1"))
    assert rs.values("concept") == [aieo("fair1")]


@pytest.mark.parametrize("name", ["describe_concept", "scenarios_for", "unique_concepts"])
def test_argument_queries_require_an_argument(name):
    with pytest.raises(MissingArgument, match=name):
        canned_query(name, _mat(seed_schema()))


@pytest.mark.parametrize("name", ["describe_concept", "scenarios_for", "unique_concepts"])
def test_argument_queries_reject_non_individuals(name):
    with pytest.raises(UnknownConcept, match="not a declared individual"):
        canned_query(name, _mat(seed_schema()), aieo("Framework"))


def test_canned_queries_are_deterministic():
    store = _two_framework_store()
    a = canned_query("describe_concept", _mat(store), aieo("fair1"))
    b = canned_query("describe_concept", _mat(store.copy()), aieo("fair1"))
    assert a == b
