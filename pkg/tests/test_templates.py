import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_catalog
from sqlcorpus.errors import ExpansionError, TemplateError
from sqlcorpus.templates import (
    FilterValue,
    MetricDef,
    TemplatePair,
    expand,
    load_filters,
    load_metrics,
    load_templates,
)

CATALOG = make_catalog(
    {"tbl": [("v", "float"), ("grp", "text"), ("code", "integer")]}
)
ANCHOR = (("tbl", "v"), ("tbl", "grp"))


def metric(i: int) -> MetricDef:
    fragments = ["SUM(v)", "COUNT(*)", "AVG(v)", "MIN(v)", "MAX(v)"]
    return MetricDef(
        id=f"m{i}",
        question_phrase=f"measure {i}",
        sql_fragment=fragments[i % len(fragments)],
    )


def filter_value(i: int) -> FilterValue:
    return FilterValue(
        id=f"f{i}",
        column_ref=("tbl", "grp"),
        question_phrase=f"group {i}",
        sql_literal=f"'g{i}'",
    )


def template(i: int, metrics=(), filters=()) -> TemplatePair:
    return TemplatePair(
        template_id=f"t{i}",
        question_template="What is the {metric} for {filter}?",
        sql_template="SELECT {metric} FROM tbl WHERE {filter_column} = {filter}",
        applicable_metrics=tuple(metrics),
        applicable_filters=tuple(filters),
        anchor=ANCHOR,
    )


def oracle_count(templates, metrics, filters) -> int:
    """Brute-force enumeration of the restricted cross products."""
    total = 0
    metric_ids = {m.id for m in metrics}
    filter_ids = {f.id for f in filters}
    for t in templates:
        m_set = set(t.applicable_metrics) or metric_ids
        f_set = set(t.applicable_filters) or filter_ids
        for _ in sorted(m_set):
            for _ in sorted(f_set):
                total += 1
    return total


class TestCardinality:
    def test_uniform_cross_product(self):
        # l=2, |M|=3, |F|=4, no restrictions
        pairs = expand(
            [template(1), template(2)],
            [metric(i) for i in range(3)],
            [filter_value(i) for i in range(4)],
        )
        assert len(pairs) == 24

    def test_singleton(self):
        pairs = expand([template(1)], [metric(0)], [filter_value(0)])
        assert len(pairs) == 1
        assert pairs[0].question == "What is the measure 0 for group 0?"
        assert pairs[0].answer_sql == "SELECT SUM(v) FROM tbl WHERE grp = 'g0'"

    def test_restricted_applicable_sets(self):
        # sizes (2x2, 1x4, 3x1) -> 4 + 4 + 3 = 11
        metrics = [metric(i) for i in range(3)]
        filters = [filter_value(i) for i in range(4)]
        templates = [
            template(1, metrics=["m0", "m1"], filters=["f0", "f1"]),
            template(2, metrics=["m2"], filters=["f0", "f1", "f2", "f3"]),
            template(3, metrics=["m0", "m1", "m2"], filters=["f3"]),
        ]
        assert len(expand(templates, metrics, filters)) == 11

    def test_deterministic_order_and_purity(self):
        templates = [template(2), template(1)]
        metrics = [metric(1), metric(0)]
        filters = [filter_value(1), filter_value(0)]
        first = expand(templates, metrics, filters)
        second = expand(templates, metrics, filters)
        assert first == second
        keys = [p.key() for p in first]
        assert keys == sorted(keys)

    def test_substituted_fragments_verbatim(self):
        pairs = expand(
            [template(1)], [metric(i) for i in range(3)], [filter_value(7)]
        )
        for pair in pairs:
            m = next(m for m in (metric(i) for i in range(3)) if m.id == pair.metric_id)
            assert m.sql_fragment in pair.answer_sql
            assert "'g7'" in pair.answer_sql


@settings(max_examples=60, deadline=None)
@given(
    n_templates=st.integers(1, 4),
    n_metrics=st.integers(1, 4),
    n_filters=st.integers(1, 4),
    data=st.data(),
)
def test_counting_law_property(n_templates, n_metrics, n_filters, data):
    metrics = [metric(i) for i in range(n_metrics)]
    filters = [filter_value(i) for i in range(n_filters)]
    templates = []
    for i in range(n_templates):
        m_subset = data.draw(
            st.sets(st.sampled_from([m.id for m in metrics]))
        )
        f_subset = data.draw(
            st.sets(st.sampled_from([f.id for f in filters]))
        )
        templates.append(template(i, metrics=sorted(m_subset), filters=sorted(f_subset)))
    pairs = expand(templates, metrics, filters)
    assert len(pairs) == oracle_count(templates, metrics, filters)
    assert len({(p.template_id, p.metric_id, p.filter_id) for p in pairs}) == len(pairs)


class TestValidation:
    def test_unknown_placeholder_is_expansion_error(self):
        with pytest.raises(ExpansionError, match="{units}"):
            TemplatePair(
                template_id="bad",
                question_template="How many {units} for {filter}?",
                sql_template="SELECT {units} FROM tbl WHERE grp = {filter}",
                anchor=ANCHOR,
            )

    def test_one_sided_placeholder_rejected(self):
        with pytest.raises(TemplateError, match="metric"):
            TemplatePair(
                template_id="bad",
                question_template="What is the {metric} for {filter}?",
                sql_template="SELECT v FROM tbl WHERE grp = {filter}",
                anchor=ANCHOR,
            )

    def test_filter_column_may_be_sql_only(self):
        TemplatePair(
            template_id="ok",
            question_template="What is the {metric} for {filter}?",
            sql_template="SELECT {metric} FROM tbl WHERE {filter_column} = {filter}",
            anchor=ANCHOR,
        )

    def test_unparseable_expansion_names_template(self):
        bad = TemplatePair(
            template_id="t_broken",
            question_template="{metric} {filter}",
            sql_template="SELECT {metric} FROM WHERE {filter}",
            anchor=ANCHOR,
        )
        with pytest.raises(TemplateError, match="t_broken"):
            expand([bad], [metric(0)], [filter_value(0)])

    def test_unknown_applicable_id_names_template(self):
        with pytest.raises(TemplateError, match="t1"):
            expand(
                [template(1, metrics=["missing"])],
                [metric(0)],
                [filter_value(0)],
            )

    def test_empty_metric_set_rejected(self):
        with pytest.raises(ExpansionError):
            expand([template(1)], [], [filter_value(0)])

    def test_loaders_validate_against_catalog(self):
        bad_filter = json.dumps(
            [
                {
                    "id": "f1",
                    "column_ref": ["tbl", "missing"],
                    "question_phrase": "x",
                    "sql_literal": "'x'",
                }
            ]
        )
        from sqlcorpus.errors import ResolutionError

        with pytest.raises(ResolutionError):
            load_filters(bad_filter, CATALOG)

    def test_duplicate_ids_rejected(self):
        docs = json.dumps(
            [
                {"id": "m1", "question_phrase": "a", "sql_fragment": "SUM(v)"},
                {"id": "m1", "question_phrase": "b", "sql_fragment": "AVG(v)"},
            ]
        )
        with pytest.raises(TemplateError, match="m1"):
            load_metrics(docs)

    def test_template_loader_resolves_anchor(self):
        doc = json.dumps(
            [
                {
                    "template_id": "t1",
                    "question_template": "{metric} {filter}",
                    "sql_template": "SELECT {metric} FROM tbl WHERE grp = {filter}",
                    "anchor": [["tbl", "missing"]],
                }
            ]
        )
        from sqlcorpus.errors import ResolutionError

        with pytest.raises(ResolutionError):
            load_templates(doc, CATALOG)
