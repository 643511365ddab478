"""Text-to-SQL fine-tuning corpus compiler and execution-accuracy evaluator."""

from .catalog import (
    Catalog,
    ColumnDef,
    Relationship,
    SchemaMode,
    SqlType,
    TableDef,
    emit_catalog,
    ingest_catalog,
    schema_context,
)
from .corpus import Corpus, assemble, read_corpus, split_balanced, subset_ladder, write_corpus
from .cot import CotAnswer, SqlAnalysis, analyze_sql, build_cot_answer
from .evaluate import EvalCase, EvalReport, ResultSet, Verdict, evaluate, rows_equivalent
from .instructions import InstructionPool, RephraseClient, assign_instructions, build_pool
from .knowledge import KnowledgeSample, Subtask, generate_knowledge
from .manifest import TokenManifest, build_manifest
from .prompts import PromptSample, PromptStructure, parse, render, render_prefix
from .templates import FilterValue, MetricDef, QaPair, TemplatePair, expand

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "ColumnDef",
    "Corpus",
    "CotAnswer",
    "EvalCase",
    "EvalReport",
    "FilterValue",
    "InstructionPool",
    "KnowledgeSample",
    "MetricDef",
    "PromptSample",
    "PromptStructure",
    "QaPair",
    "Relationship",
    "RephraseClient",
    "ResultSet",
    "SchemaMode",
    "SqlAnalysis",
    "SqlType",
    "Subtask",
    "TableDef",
    "TemplatePair",
    "TokenManifest",
    "Verdict",
    "analyze_sql",
    "assemble",
    "assign_instructions",
    "build_cot_answer",
    "build_manifest",
    "build_pool",
    "emit_catalog",
    "evaluate",
    "expand",
    "generate_knowledge",
    "ingest_catalog",
    "parse",
    "read_corpus",
    "render",
    "render_prefix",
    "rows_equivalent",
    "schema_context",
    "split_balanced",
    "subset_ladder",
    "write_corpus",
]
