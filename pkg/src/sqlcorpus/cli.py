"""Command-line pipeline: one entry point, one seed, reproducible artifacts.

Every subcommand reads a JSON configuration file (flags override file
values), derives its stage seed from the single pipeline seed, and writes
outputs atomically. Running ``all`` twice with the same configuration
produces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus as corpus_mod
from .catalog import Catalog, SchemaMode, emit_catalog, ingest_catalog
from .cot import analyze_sql, build_cot_answer
from .errors import ConfigError, EvalEnvironmentError, SqlCorpusError
from .evaluate import build_fixture_db, evaluate, load_cases
from .instructions import InstructionPool, RephraseClient, build_pool
from .knowledge import ALL_SUBTASKS, generate_knowledge
from .manifest import build_manifest
from .prompts import PromptStructure, answer_suffix
from .seeding import derive_seed
from .templates import expand, load_filters, load_metrics, load_templates

REPHRASE_ENDPOINT_ENV = "SQLCORPUS_REPHRASE_ENDPOINT"
REPHRASE_TOKEN_ENV = "SQLCORPUS_REPHRASE_TOKEN"

SUBCOMMANDS = (
    "ingest",
    "expand",
    "cot",
    "knowledge",
    "diversify",
    "render",
    "manifest",
    "split",
    "ladder",
    "eval",
    "all",
)


@dataclass
class PipelineConfig:
    seed: int
    base_dir: Path
    output_dir: Path
    raw: dict = field(default_factory=dict)
    catalog: Path | None = None
    templates: Path | None = None
    metrics: Path | None = None
    filters: Path | None = None
    instruction: str | None = None
    instruction_variants: Path | None = None
    instruction_pool_size: int = 8
    rephrase_endpoint: str | None = None
    phrasing_dir: Path | None = None
    structures: dict = field(default_factory=dict)
    schema_mode: str = "exact"
    families: list = field(default_factory=lambda: ["schema", "cot", "knowledge"])
    knowledge_subtasks: list = field(
        default_factory=lambda: [s.value for s in ALL_SUBTASKS]
    )
    test_size: int = 500
    ladder_sizes: list = field(default_factory=list)
    eval_database: Path | None = None
    eval_seed_script: Path | None = None
    eval_cases: Path | None = None
    eval_timeout_s: float = 10.0
    eval_row_cap: int = 100_000
    eval_tolerance: float = 1e-6

    def require(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"configuration is missing {name!r}")
        return value


def load_config(path: str | Path, overrides: dict | None = None) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file missing: {path}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    if "seed" not in raw:
        raise ConfigError("configuration must set an explicit seed")
    base = path.parent

    def resolve(key, must_exist=True):
        if raw.get(key) is None:
            return None
        resolved = (base / str(raw[key])).resolve()
        if must_exist and not resolved.exists():
            raise ConfigError(f"configured path for {key!r} missing: {resolved}")
        return resolved

    eval_raw = raw.get("eval", {})

    def resolve_eval(key, must_exist=True):
        if eval_raw.get(key) is None:
            return None
        resolved = (base / str(eval_raw[key])).resolve()
        if must_exist and not resolved.exists():
            raise ConfigError(f"configured path for eval.{key!r} missing: {resolved}")
        return resolved

    config = PipelineConfig(
        seed=int(raw["seed"]),
        base_dir=base,
        output_dir=(base / str(raw.get("output_dir", "out"))).resolve(),
        raw=raw,
        catalog=resolve("catalog"),
        templates=resolve("templates"),
        metrics=resolve("metrics"),
        filters=resolve("filters"),
        instruction=raw.get("instruction"),
        instruction_variants=resolve("instruction_variants"),
        instruction_pool_size=int(raw.get("instruction_pool_size", 8)),
        rephrase_endpoint=os.environ.get(
            REPHRASE_ENDPOINT_ENV, raw.get("rephrase_endpoint")
        ),
        phrasing_dir=resolve("phrasing_dir"),
        structures=raw.get("structures", {}),
        schema_mode=raw.get("schema_mode", "exact"),
        families=raw.get("families", ["schema", "cot", "knowledge"]),
        knowledge_subtasks=raw.get(
            "knowledge_subtasks", [s.value for s in ALL_SUBTASKS]
        ),
        test_size=int(raw.get("test_size", 500)),
        ladder_sizes=[int(n) for n in raw.get("ladder_sizes", [])],
        eval_database=resolve_eval("database", must_exist=False),
        eval_seed_script=resolve_eval("seed_script"),
        eval_cases=resolve_eval("cases"),
        eval_timeout_s=float(eval_raw.get("timeout_s", 10.0)),
        eval_row_cap=int(eval_raw.get("row_cap", 100_000)),
        eval_tolerance=float(eval_raw.get("tolerance", 1e-6)),
    )
    return config


# --- shared stage helpers ---------------------------------------------------


def _load_catalog(config: PipelineConfig) -> Catalog:
    return ingest_catalog(Path(config.require("catalog")).read_text(encoding="utf-8"))


def _load_template_inputs(config: PipelineConfig, catalog: Catalog):
    templates = load_templates(
        Path(config.require("templates")).read_text(encoding="utf-8"), catalog
    )
    metrics = load_metrics(
        Path(config.require("metrics")).read_text(encoding="utf-8")
    )
    filters = load_filters(
        Path(config.require("filters")).read_text(encoding="utf-8"), catalog
    )
    return templates, metrics, filters


def _expand_pairs(config: PipelineConfig, catalog: Catalog):
    templates, metrics, filters = _load_template_inputs(config, catalog)
    return expand(templates, metrics, filters)


def _derive_cot(pairs, catalog):
    answers = {}
    for pair in pairs:
        analysis = analyze_sql(pair.answer_sql, catalog)
        answers[pair.key()] = build_cot_answer(pair.answer_sql, analysis)
    return answers


def _build_pool_from_config(config: PipelineConfig) -> InstructionPool:
    base = config.require("instruction")
    k = config.instruction_pool_size
    static_text = None
    if config.instruction_variants is not None:
        static_text = Path(config.instruction_variants).read_text(encoding="utf-8")
    if config.rephrase_endpoint:
        client = RephraseClient(
            config.rephrase_endpoint, token=os.environ.get(REPHRASE_TOKEN_ENV)
        )
        try:
            return build_pool(base, k, client)
        except SqlCorpusError:
            if static_text is None:
                raise
            print(
                "rephrase client failed; falling back to the static variant file",
                file=sys.stderr,
            )
    return build_pool(base, k, static_text)


def _write_jsonl(path: Path, records: list[dict]) -> None:
    text = "\n".join(json.dumps(r, ensure_ascii=False) for r in records)
    corpus_mod.atomic_write(path, text + ("\n" if text else ""))


def _qa_records(pairs) -> list[dict]:
    return [
        {
            "question": p.question,
            "answer_sql": p.answer_sql,
            "template_id": p.template_id,
            "metric_id": p.metric_id,
            "filter_id": p.filter_id,
            "anchor": [list(pair) for pair in p.anchor],
        }
        for p in pairs
    ]


# --- subcommands --------------------------------------------------------------


def cmd_ingest(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    out = config.output_dir / "catalog.json"
    corpus_mod.atomic_write(out, emit_catalog(catalog))
    print(
        f"catalog ok: {len(catalog.tables)} tables, "
        f"{sum(len(t.columns) for t in catalog.tables)} columns, "
        f"{len(catalog.relationships)} relationships -> {out}"
    )
    return 0


def cmd_expand(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    pairs = _expand_pairs(config, catalog)
    out = config.output_dir / "qa_pairs.jsonl"
    _write_jsonl(out, _qa_records(pairs))
    print(f"expanded {len(pairs)} question-SQL pairs -> {out}")
    return 0


def cmd_cot(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    if args.sql:
        analysis = analyze_sql(args.sql, catalog)
        print(
            json.dumps(
                {
                    "tables": list(analysis.tables),
                    "columns": [list(c) for c in analysis.columns],
                    "join_pairs": [
                        [list(left), list(right)]
                        for left, right in analysis.join_pairs
                    ],
                    "normalized_sql": analysis.normalized_sql,
                    "dialect_functions": list(analysis.dialect_functions),
                },
                indent=2,
            )
        )
        return 0
    pairs = _expand_pairs(config, catalog)
    records = []
    for pair in pairs:
        analysis = analyze_sql(pair.answer_sql, catalog)
        answer = build_cot_answer(pair.answer_sql, analysis)
        records.append(
            {
                "key": pair.key(),
                "tables": list(analysis.tables),
                "columns": [list(c) for c in analysis.columns],
                "join_pairs": [
                    [list(left), list(right)] for left, right in analysis.join_pairs
                ],
                "normalized_sql": analysis.normalized_sql,
                "answer": answer.answer_text(),
            }
        )
    out = config.output_dir / "cot.jsonl"
    _write_jsonl(out, records)
    print(f"derived {len(records)} reasoning answers -> {out}")
    return 0


def cmd_knowledge(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    samples = generate_knowledge(
        catalog,
        subtasks=config.knowledge_subtasks,
        seed=derive_seed(config.seed, "knowledge"),
        phrasing_dir=config.phrasing_dir,
    )
    out = config.output_dir / "knowledge.jsonl"
    _write_jsonl(
        out,
        [
            {
                "subtask": s.subtask.value,
                "question": s.question,
                "answer": s.answer,
                "provenance": list(s.provenance),
            }
            for s in samples
        ],
    )
    print(f"generated {len(samples)} knowledge samples -> {out}")
    return 0


def cmd_diversify(config: PipelineConfig, args) -> int:
    pool = _build_pool_from_config(config)
    out = config.output_dir / "instruction_pool.json"
    corpus_mod.atomic_write(
        out,
        json.dumps(
            {
                "base_instruction": pool.base_instruction,
                "variants": list(pool.variants),
                "provenance": pool.provenance,
            },
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
    )
    print(f"built instruction pool of {pool.size} variants -> {out}")
    return 0


def cmd_render(config: PipelineConfig, args) -> int:
    path = Path(args.corpus) if args.corpus else config.output_dir / "corpus.jsonl"
    if not path.exists():
        raise EvalEnvironmentError(f"corpus file missing: {path}")
    records = [
        json.loads(line)
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if args.id:
        matches = [r for r in records if r["id"] == args.id]
        if not matches:
            raise ConfigError(f"no sample with id {args.id!r} in {path}")
        record = matches[0]
    else:
        record = records[args.index]
    suffix = answer_suffix(PromptStructure(record["structure"]))
    sys.stdout.write(record["prompt"] + record["completion"] + suffix)
    return 0


def cmd_manifest(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    manifest = build_manifest(catalog, include_metadata=not args.no_metadata)
    out = config.output_dir / "token_manifest.json"
    corpus_mod.atomic_write(out, manifest.to_json())
    print(
        f"manifest: {len(manifest.structural_tags)} structural tags, "
        f"{len(manifest.metadata_tokens)} metadata tokens -> {out}"
    )
    return 0


def _assemble_corpus(config: PipelineConfig, catalog: Catalog):
    pairs = _expand_pairs(config, catalog)
    cot_answers = _derive_cot(pairs, catalog) if "cot" in config.families else None
    knowledge = (
        generate_knowledge(
            catalog,
            subtasks=config.knowledge_subtasks,
            seed=derive_seed(config.seed, "knowledge"),
            phrasing_dir=config.phrasing_dir,
        )
        if "knowledge" in config.families
        else None
    )
    pool = _build_pool_from_config(config)
    built = corpus_mod.assemble(
        pairs,
        catalog,
        pool,
        config.seed,
        cot=cot_answers,
        knowledge=knowledge,
        structures={
            key: PromptStructure(value) for key, value in config.structures.items()
        },
        schema_mode=SchemaMode(config.schema_mode),
    )
    return pairs, cot_answers, knowledge, pool, built


def cmd_split(config: PipelineConfig, args) -> int:
    path = Path(args.corpus) if args.corpus else config.output_dir / "corpus.jsonl"
    if not path.exists():
        raise EvalEnvironmentError(f"corpus file missing: {path}")
    full = corpus_mod.read_corpus(path)
    train, test = corpus_mod.split_train_test(
        full, config.test_size, derive_seed(config.seed, "split")
    )
    corpus_mod.write_corpus(train, config.output_dir / "train.jsonl")
    corpus_mod.write_corpus(test, config.output_dir / "test.jsonl")
    print(f"split {len(full)} samples into {len(train)} train / {len(test)} test")
    return 0


def cmd_ladder(config: PipelineConfig, args) -> int:
    path = Path(args.corpus) if args.corpus else config.output_dir / "train.jsonl"
    if not path.exists():
        raise EvalEnvironmentError(f"training corpus missing: {path}")
    train = corpus_mod.read_corpus(path)
    if not config.ladder_sizes:
        raise ConfigError("configuration sets no ladder_sizes")
    subsets = corpus_mod.subset_ladder(
        train, config.ladder_sizes, derive_seed(config.seed, "ladder")
    )
    for subset in subsets:
        size = subset.generation_config["subset_size"]
        corpus_mod.write_corpus(subset, config.output_dir / f"train_n{size}.jsonl")
    print(f"wrote {len(subsets)} nested training subsets")
    return 0


def cmd_eval(config: PipelineConfig, args) -> int:
    db_path = config.require("eval_database")
    if not Path(db_path).exists():
        if config.eval_seed_script is not None:
            build_fixture_db(db_path, config.eval_seed_script)
        else:
            raise EvalEnvironmentError(
                f"fixture database missing and no seed script configured: {db_path}"
            )
    cases = load_cases(Path(config.require("eval_cases")).read_text(encoding="utf-8"))
    report = evaluate(
        cases,
        db_path,
        timeout_s=config.eval_timeout_s,
        row_cap=config.eval_row_cap,
        tolerance=config.eval_tolerance,
    )
    out = config.output_dir / "eval_report.json"
    corpus_mod.atomic_write(out, report.to_json())
    print(report.summary_table())
    print(f"report -> {out}")
    return 0


def cmd_all(config: PipelineConfig, args) -> int:
    catalog = _load_catalog(config)
    pairs, cot_answers, knowledge, pool, built = _assemble_corpus(config, catalog)

    out = config.output_dir
    _write_jsonl(out / "qa_pairs.jsonl", _qa_records(pairs))
    if cot_answers is not None:
        _write_jsonl(
            out / "cot.jsonl",
            [
                {"key": key, "answer": answer.answer_text()}
                for key, answer in sorted(cot_answers.items())
            ],
        )
    if knowledge is not None:
        _write_jsonl(
            out / "knowledge.jsonl",
            [
                {
                    "subtask": s.subtask.value,
                    "question": s.question,
                    "answer": s.answer,
                    "provenance": list(s.provenance),
                }
                for s in knowledge
            ],
        )
    corpus_mod.atomic_write(
        out / "instruction_pool.json",
        json.dumps(
            {
                "base_instruction": pool.base_instruction,
                "variants": list(pool.variants),
                "provenance": pool.provenance,
            },
            indent=2,
            ensure_ascii=False,
        )
        + "\n",
    )

    corpus_mod.write_corpus(built, out / "corpus.jsonl")
    train, test = corpus_mod.split_train_test(
        built, config.test_size, derive_seed(config.seed, "split")
    )
    corpus_mod.write_corpus(train, out / "train.jsonl")
    corpus_mod.write_corpus(test, out / "test.jsonl")

    manifest = build_manifest(catalog, include_metadata=True)
    corpus_mod.atomic_write(out / "token_manifest.json", manifest.to_json())
    corpus_mod.atomic_write(
        out / "generation_config.json",
        json.dumps(config.raw, indent=2, sort_keys=True) + "\n",
    )
    print(
        f"pipeline complete: {len(built)} samples "
        f"({len(train)} train / {len(test)} test) -> {out}"
    )
    return 0


_HANDLERS = {
    "ingest": cmd_ingest,
    "expand": cmd_expand,
    "cot": cmd_cot,
    "knowledge": cmd_knowledge,
    "diversify": cmd_diversify,
    "render": cmd_render,
    "manifest": cmd_manifest,
    "split": cmd_split,
    "ladder": cmd_ladder,
    "eval": cmd_eval,
    "all": cmd_all,
}


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqlcorpus",
        description="Compile text-to-SQL fine-tuning corpora and evaluate "
        "predictions by execution accuracy.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="pipeline config JSON")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument(
            "--schema-mode",
            choices=[m.value for m in SchemaMode],
            help="override the schema context mode",
        )
        p.add_argument("--output-dir", help="override the output directory")
        p.add_argument(
            "--structures",
            help="override prompt structures, e.g. schema=base_prompt_1",
        )
        p.add_argument("--test-size", type=int, help="override the test set size")
        p.add_argument(
            "--ladder-sizes", help="override ladder sizes, e.g. 250,500,750"
        )
        if name == "cot":
            p.add_argument("--sql", help="analyze one statement and print JSON")
        if name in ("render", "split", "ladder"):
            p.add_argument("--corpus", help="corpus JSONL to read")
        if name == "render":
            p.add_argument("--id", help="sample id to render")
            p.add_argument("--index", type=int, default=0, help="sample index")
        if name == "manifest":
            p.add_argument(
                "--no-metadata",
                action="store_true",
                help="emit structural tags only",
            )
    return parser


def _overrides_from_args(args) -> dict:
    overrides: dict = {
        "seed": args.seed,
        "schema_mode": args.schema_mode,
        "output_dir": args.output_dir,
        "test_size": args.test_size,
    }
    if args.ladder_sizes:
        overrides["ladder_sizes"] = [
            int(n) for n in args.ladder_sizes.split(",") if n.strip()
        ]
    if args.structures:
        parsed = {}
        for item in args.structures.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise ConfigError(
                    f"bad --structures entry {item!r}, expected family=structure"
                )
            parsed[key.strip()] = value.strip()
        overrides["structures"] = parsed
    return overrides


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        config = load_config(args.config, _overrides_from_args(args))
        return _HANDLERS[args.subcommand](config, args)
    except SqlCorpusError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
