"""Golden question-SQL templates and their cross-product expansion.

Each template pairs a question pattern with a SQL pattern over ``{metric}``
and ``{filter}`` slots (plus the auxiliary ``{filter_column}``, which
substitutes the filter's column name). Expansion takes the full cross
product of each template's applicable metric and filter sets in a fixed
lexicographic order, so the uniform case yields exactly
``templates x metrics x filters`` pairs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from . import sqlast
from .catalog import Catalog
from .errors import ExpansionError, SqlSyntaxError, TemplateError

_PLACEHOLDER = re.compile(r"\{([a-zA-Z_]+)\}")
_KNOWN_PLACEHOLDERS = {"metric", "filter", "filter_column"}
# Slots that must appear on both sides of a template or on neither.
_PAIRED_PLACEHOLDERS = {"metric", "filter"}


@dataclass(frozen=True)
class MetricDef:
    id: str
    question_phrase: str
    sql_fragment: str

    def __post_init__(self):
        if not self.id or not self.question_phrase or not self.sql_fragment:
            raise TemplateError(f"metric {self.id!r} has empty fields")


@dataclass(frozen=True)
class FilterValue:
    id: str
    column_ref: tuple[str, str]
    question_phrase: str
    sql_literal: str

    def __post_init__(self):
        object.__setattr__(self, "column_ref", tuple(self.column_ref))
        if not self.id or not self.question_phrase or not self.sql_literal:
            raise TemplateError(f"filter {self.id!r} has empty fields")


@dataclass(frozen=True)
class TemplatePair:
    template_id: str
    question_template: str
    sql_template: str
    applicable_metrics: tuple[str, ...] = ()
    applicable_filters: tuple[str, ...] = ()
    anchor: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "applicable_metrics", tuple(self.applicable_metrics)
        )
        object.__setattr__(
            self, "applicable_filters", tuple(self.applicable_filters)
        )
        object.__setattr__(
            self, "anchor", tuple(tuple(pair) for pair in self.anchor)
        )
        for text, side in (
            (self.question_template, "question"),
            (self.sql_template, "sql"),
        ):
            for name in _PLACEHOLDER.findall(text):
                if name not in _KNOWN_PLACEHOLDERS:
                    raise ExpansionError(
                        f"template {self.template_id!r} uses placeholder "
                        f"{{{name}}} in its {side} with no substitution set"
                    )
        q_slots = set(_PLACEHOLDER.findall(self.question_template))
        s_slots = set(_PLACEHOLDER.findall(self.sql_template))
        mismatch = (q_slots ^ s_slots) & _PAIRED_PLACEHOLDERS
        if mismatch:
            raise TemplateError(
                f"template {self.template_id!r}: placeholder(s) "
                f"{sorted(mismatch)} must appear in both question and sql"
            )


@dataclass(frozen=True)
class QaPair:
    question: str
    answer_sql: str
    template_id: str
    metric_id: str
    filter_id: str
    anchor: tuple[tuple[str, str], ...] = ()

    def key(self) -> str:
        return f"{self.template_id}:{self.metric_id}:{self.filter_id}"


# --- loading --------------------------------------------------------------


def load_metrics(text: str) -> list[MetricDef]:
    metrics = [MetricDef(**doc) for doc in json.loads(text)]
    _check_unique_ids(metrics, "metric")
    return metrics


def load_filters(text: str, catalog: Catalog) -> list[FilterValue]:
    filters = [FilterValue(**doc) for doc in json.loads(text)]
    _check_unique_ids(filters, "filter")
    for flt in filters:
        catalog.resolve_anchor([flt.column_ref])
    return filters


def load_templates(text: str, catalog: Catalog) -> list[TemplatePair]:
    templates = []
    for doc in json.loads(text):
        template = TemplatePair(**doc)
        templates.append(
            TemplatePair(
                template_id=template.template_id,
                question_template=template.question_template,
                sql_template=template.sql_template,
                applicable_metrics=template.applicable_metrics,
                applicable_filters=template.applicable_filters,
                anchor=tuple(catalog.resolve_anchor(template.anchor)),
            )
        )
    seen = set()
    for template in templates:
        if template.template_id in seen:
            raise TemplateError(f"duplicate template_id {template.template_id!r}")
        seen.add(template.template_id)
    return templates


def _check_unique_ids(items, what: str):
    seen = set()
    for item in items:
        if item.id in seen:
            raise TemplateError(f"duplicate {what} id {item.id!r}")
        seen.add(item.id)


# --- expansion ------------------------------------------------------------


def expand(
    templates: list[TemplatePair],
    metrics: list[MetricDef],
    filters: list[FilterValue],
) -> list[QaPair]:
    """Cross product of every template with its applicable metrics/filters.

    Output order is (template_id, metric_id, filter_id) lexicographic and the
    function is pure, so identical inputs yield byte-identical results.
    """
    if not metrics or not filters:
        raise ExpansionError("metric and filter sets must be non-empty")
    metrics_by_id = {m.id: m for m in metrics}
    filters_by_id = {f.id: f for f in filters}

    pairs: list[QaPair] = []
    for template in sorted(templates, key=lambda t: t.template_id):
        metric_ids = _applicable_ids(
            template, template.applicable_metrics, metrics_by_id, "metric"
        )
        filter_ids = _applicable_ids(
            template, template.applicable_filters, filters_by_id, "filter"
        )
        for metric_id in metric_ids:
            for filter_id in filter_ids:
                pairs.append(
                    _substitute(
                        template, metrics_by_id[metric_id], filters_by_id[filter_id]
                    )
                )
    return pairs


def _applicable_ids(template, declared, by_id, what) -> list[str]:
    if not declared:
        return sorted(by_id)
    for item_id in declared:
        if item_id not in by_id:
            raise TemplateError(
                f"template {template.template_id!r} declares unknown "
                f"{what} id {item_id!r}"
            )
    return sorted(declared)


def _substitute(
    template: TemplatePair, metric: MetricDef, flt: FilterValue
) -> QaPair:
    question = (
        template.question_template.replace("{metric}", metric.question_phrase)
        .replace("{filter}", flt.question_phrase)
        .replace("{filter_column}", flt.column_ref[1])
    )
    answer_sql = (
        template.sql_template.replace("{metric}", metric.sql_fragment)
        .replace("{filter}", flt.sql_literal)
        .replace("{filter_column}", flt.column_ref[1])
    )
    for text, side in ((question, "question"), (answer_sql, "sql")):
        leftover = _PLACEHOLDER.search(text)
        if leftover:
            raise ExpansionError(
                f"template {template.template_id!r}: unresolved placeholder "
                f"{leftover.group(0)} in expanded {side}"
            )
    try:
        sqlast.parse_statement(answer_sql)
    except SqlSyntaxError as exc:
        raise TemplateError(
            f"template {template.template_id!r} expands to unparseable SQL "
            f"with metric {metric.id!r} and filter {flt.id!r}: {exc}"
        ) from exc
    return QaPair(
        question=question,
        answer_sql=answer_sql,
        template_id=template.template_id,
        metric_id=metric.id,
        filter_id=flt.id,
        anchor=template.anchor,
    )
