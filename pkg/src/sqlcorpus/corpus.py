"""Assemble, split, and serialize training corpora.

Assembly turns question-SQL pairs, reasoning answers, and knowledge samples
into rendered prompt samples under the configured structures, attaches
schema contexts, and assigns instruction variants. Splitting is stratified
by anchor tables so evaluation sets stay balanced across tables; the size
ladder produces nested subsets so size comparisons isolate the size effect.

Corpora serialize to JSON Lines (one sample per line, sorted by id) with
the generation configuration echoed into a sibling ``*.config.json``; a
fixed seed therefore reproduces every output file byte for byte.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import Catalog, SchemaMode, schema_context
from .cot import CotAnswer
from .errors import LadderError, SqlCorpusError, StratificationError
from .instructions import InstructionPool, assign_instructions
from .knowledge import KnowledgeSample
from .prompts import (
    CLAIMER_COT,
    CLAIMER_KNOWLEDGE,
    CLAIMER_SQL,
    COT_INSTRUCTION,
    PromptSample,
    PromptStructure,
    answer_suffix,
    build_system,
    parse,
    render_prefix,
)
from .seeding import derive_seed
from .templates import QaPair

# Structures whose system block carries a schema context.
_SCHEMA_BEARING = {
    PromptStructure.META_SCHEMA,
    PromptStructure.BASE_PROMPT_1,
    PromptStructure.BASE_PROMPT_2,
}
# Structures whose instruction block is drawn from the diversified pool.
_POOL_INSTRUCTED = {PromptStructure.META_SCHEMA, PromptStructure.BASE_PROMPT_1}

DEFAULT_STRUCTURES = {
    "schema": PromptStructure.META_SCHEMA,
    "cot": PromptStructure.META_COT,
    "knowledge": PromptStructure.META_KNOWLEDGE,
}


@dataclass
class Corpus:
    samples: list[PromptSample]
    split: str | None = None  # None until split into train/test
    generation_config: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [s.meta["sample_id"] for s in self.samples]
        if len(set(ids)) != len(ids):
            raise SqlCorpusError("corpus contains duplicate sample ids")

    def ids(self) -> list[str]:
        return [s.meta["sample_id"] for s in self.samples]

    def __len__(self) -> int:
        return len(self.samples)


def assemble(
    qa: list[QaPair],
    catalog: Catalog,
    pool: InstructionPool,
    seed: int,
    cot: dict[str, CotAnswer] | None = None,
    knowledge: list[KnowledgeSample] | None = None,
    structures: dict[str, PromptStructure] | None = None,
    schema_mode: SchemaMode = SchemaMode.EXACT,
) -> Corpus:
    """One prompt sample per input record, across the enabled families.

    ``cot`` maps ``QaPair.key()`` to its derived reasoning answer; passing it
    adds one reasoning sample per pair on top of the schema family.
    """
    structures = {**DEFAULT_STRUCTURES, **(structures or {})}
    schema_mode = SchemaMode(schema_mode)
    samples: list[PromptSample] = []

    qa_structure = PromptStructure(structures["schema"])
    for pair in qa:
        sample_id = f"schema:{pair.key()}"
        try:
            samples.append(
                _qa_sample(pair, sample_id, qa_structure, catalog, schema_mode, seed)
            )
        except SqlCorpusError as exc:
            raise type(exc)(f"sample {sample_id}: {exc}") from exc

    if cot is not None:
        cot_structure = PromptStructure(structures["cot"])
        for pair in qa:
            sample_id = f"cot:{pair.key()}"
            answer = cot.get(pair.key())
            if answer is None:
                raise SqlCorpusError(
                    f"sample {sample_id}: no reasoning answer for this pair"
                )
            samples.append(
                PromptSample(
                    question=pair.question,
                    answer=answer.answer_text(),
                    structure=cot_structure,
                    system=CLAIMER_COT,
                    instruction=COT_INSTRUCTION,
                    meta={
                        "sample_id": sample_id,
                        "task_type": "cot",
                        "template_id": pair.template_id,
                        "anchor_tables": sorted({t for t, _ in pair.anchor}),
                    },
                )
            )

    for ks in knowledge or []:
        sample_id = f"kn:{ks.key()}"
        samples.append(
            PromptSample(
                question=ks.question,
                answer=ks.answer,
                structure=PromptStructure(structures["knowledge"]),
                system=CLAIMER_KNOWLEDGE,
                instruction=None,
                meta={
                    "sample_id": sample_id,
                    "task_type": "knowledge",
                    "anchor_tables": ks.anchor_tables(catalog),
                },
            )
        )

    samples.sort(key=lambda s: s.meta["sample_id"])
    pooled = [s for s in samples if s.structure in _POOL_INSTRUCTED]
    others = [s for s in samples if s.structure not in _POOL_INSTRUCTED]
    pooled = assign_instructions(pooled, pool, derive_seed(seed, "assign-instructions"))
    samples = sorted(pooled + others, key=lambda s: s.meta["sample_id"])

    return Corpus(
        samples=samples,
        generation_config={
            "seed": seed,
            "schema_mode": schema_mode.value,
            "structures": {k: PromptStructure(v).value for k, v in structures.items()},
            "instruction_pool_size": pool.size,
            "counts": {
                "schema": len(qa),
                "cot": len(qa) if cot is not None else 0,
                "knowledge": len(knowledge or []),
            },
        },
    )


def _qa_sample(pair, sample_id, structure, catalog, schema_mode, seed) -> PromptSample:
    schema_block = None
    if structure in _SCHEMA_BEARING:
        schema_block = schema_context(
            catalog,
            schema_mode,
            anchor=pair.anchor,
            seed=derive_seed(seed, f"schema-context:{sample_id}"),
        )
    if structure is PromptStructure.BASE_PROMPT_2:
        system = schema_block or ""
        instruction = None
    else:
        system = build_system(CLAIMER_SQL, schema_block)
        instruction = ""  # replaced by the pool assignment pass
    meta = {
        "sample_id": sample_id,
        "task_type": "schema",
        "template_id": pair.template_id,
        "anchor_tables": sorted({t for t, _ in pair.anchor}),
    }
    if schema_block is not None:
        meta["schema_mode"] = SchemaMode(schema_mode).value
    return PromptSample(
        question=pair.question,
        answer=pair.answer_sql,
        structure=structure,
        system=system,
        instruction=instruction,
        meta=meta,
    )


# --- serialization --------------------------------------------------------


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _sidecar_path(path: Path) -> Path:
    return path.with_name(path.stem + ".config.json")


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    lines = []
    for sample in corpus.samples:
        lines.append(
            json.dumps(
                {
                    "id": sample.meta["sample_id"],
                    "task_type": sample.meta["task_type"],
                    "structure": PromptStructure(sample.structure).value,
                    "prompt": render_prefix(sample),
                    "completion": sample.answer,
                    "meta": sample.meta,
                },
                ensure_ascii=False,
            )
        )
    atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))
    sidecar = {"split": corpus.split, "generation_config": corpus.generation_config}
    atomic_write(_sidecar_path(path), json.dumps(sidecar, indent=2) + "\n")


def read_corpus(path: str | Path) -> Corpus:
    """Inverse of ``write_corpus``: reconstruct every sample by re-parsing."""
    path = Path(path)
    samples = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            record = json.loads(line)
            structure = PromptStructure(record["structure"])
            full_text = (
                record["prompt"] + record["completion"] + answer_suffix(structure)
            )
            parsed = parse(full_text, structure)
            samples.append(
                PromptSample(
                    question=parsed.question,
                    answer=parsed.answer,
                    structure=structure,
                    system=parsed.system,
                    instruction=parsed.instruction,
                    meta=record["meta"],
                )
            )
    sidecar_file = _sidecar_path(path)
    split = None
    generation_config: dict = {}
    if sidecar_file.exists():
        sidecar = json.loads(sidecar_file.read_text(encoding="utf-8"))
        split = sidecar.get("split")
        generation_config = sidecar.get("generation_config", {})
    return Corpus(samples=samples, split=split, generation_config=generation_config)


# --- splitting and subsetting ----------------------------------------------


def stratum_of(sample: PromptSample) -> str:
    return ",".join(sample.meta.get("anchor_tables", [])) or "(none)"


def split_balanced(
    corpus: Corpus, test_size: int, seed: int
) -> tuple[Corpus, Corpus]:
    """Stratified split with equal per-stratum test quotas.

    Quota is ``test_size // strata``; any remainder goes to the
    lexicographically first strata, one extra sample each.
    """
    by_stratum: dict[str, list[PromptSample]] = {}
    for sample in corpus.samples:
        by_stratum.setdefault(stratum_of(sample), []).append(sample)
    strata = sorted(by_stratum)
    base, remainder = divmod(test_size, len(strata))

    rng = random.Random(seed)
    test_ids: set[str] = set()
    for index, stratum in enumerate(strata):
        quota = base + (1 if index < remainder else 0)
        members = sorted(s.meta["sample_id"] for s in by_stratum[stratum])
        if len(members) < quota:
            raise StratificationError(
                f"stratum {stratum!r} has {len(members)} samples, "
                f"needs {quota} for the test quota"
            )
        rng.shuffle(members)
        test_ids.update(members[:quota])

    config = dict(corpus.generation_config)
    config.update({"split_seed": seed, "test_size": test_size})
    train = [s for s in corpus.samples if s.meta["sample_id"] not in test_ids]
    test = [s for s in corpus.samples if s.meta["sample_id"] in test_ids]
    return (
        Corpus(samples=train, split="train", generation_config=config),
        Corpus(samples=test, split="test", generation_config=config),
    )


def split_train_test(corpus: Corpus, test_size: int, seed: int) -> tuple[Corpus, Corpus]:
    """Split a mixed corpus by question-SQL pair identity.

    The test set is drawn from the schema-family samples (those are what an
    evaluation executes), balanced across anchor-table strata. Reasoning
    samples of test pairs are dropped from the train side so no test
    question leaks into training; knowledge samples always train.
    """
    qa_samples = [s for s in corpus.samples if s.meta.get("task_type") == "schema"]
    if not qa_samples:
        return split_balanced(corpus, test_size, seed)
    qa_corpus = Corpus(
        samples=qa_samples, generation_config=corpus.generation_config
    )
    train_qa, test_qa = split_balanced(qa_corpus, test_size, seed)
    test_pair_keys = {
        sample_id.split(":", 1)[1] for sample_id in test_qa.ids()
    }
    extra_train = [
        s
        for s in corpus.samples
        if s.meta.get("task_type") != "schema"
        and not (
            s.meta.get("task_type") == "cot"
            and s.meta["sample_id"].split(":", 1)[1] in test_pair_keys
        )
    ]
    train_samples = sorted(
        train_qa.samples + extra_train, key=lambda s: s.meta["sample_id"]
    )
    config = dict(corpus.generation_config)
    config.update({"split_seed": seed, "test_size": test_size})
    return (
        Corpus(samples=train_samples, split="train", generation_config=config),
        Corpus(samples=test_qa.samples, split="test", generation_config=config),
    )


def subset_ladder(train: Corpus, sizes: list[int], seed: int) -> list[Corpus]:
    """Nested seeded subsets of the training corpus, one per requested size."""
    sizes = sorted(sizes)
    if not sizes:
        raise LadderError("no ladder sizes given")
    if sizes[0] < 1:
        raise LadderError(f"ladder sizes must be positive, got {sizes[0]}")
    if sizes[-1] > len(train.samples):
        raise LadderError(
            f"ladder size {sizes[-1]} exceeds the training corpus "
            f"({len(train.samples)} samples)"
        )
    order = sorted(s.meta["sample_id"] for s in train.samples)
    random.Random(seed).shuffle(order)
    subsets = []
    for size in sizes:
        chosen = set(order[:size])
        config = dict(train.generation_config)
        config.update({"ladder_seed": seed, "subset_size": size})
        subsets.append(
            Corpus(
                samples=[
                    s for s in train.samples if s.meta["sample_id"] in chosen
                ],
                split=train.split,
                generation_config=config,
            )
        )
    return subsets
