"""Catalog-fact training samples: the seven metadata subtasks.

Every sample's answer is a direct function of the catalog (column listings,
owning tables, descriptions, data types, join conditions), so each one can
be re-derived and checked by lookup. Question surface forms come from small
editable phrasing pools, chosen per sample by a seeded generator.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from .catalog import Catalog
from .errors import ConfigError

logger = logging.getLogger(__name__)


class Subtask(str, Enum):
    COLUMNS_OF_TABLE = "columns_of_table"
    TABLE_FROM_DESCRIPTION = "table_from_description"
    TABLE_OF_COLUMN = "table_of_column"
    DESCRIBE_TABLE = "describe_table"
    DESCRIBE_COLUMN = "describe_column"
    COLUMN_DATATYPE = "column_datatype"
    JOIN_RELATIONSHIP = "join_relationship"


ALL_SUBTASKS = tuple(Subtask)

_DESCRIPTION_SUBTASKS = {
    Subtask.TABLE_FROM_DESCRIPTION,
    Subtask.DESCRIBE_TABLE,
    Subtask.DESCRIBE_COLUMN,
}


@dataclass(frozen=True)
class KnowledgeSample:
    subtask: Subtask
    question: str
    answer: str
    provenance: tuple[str, str | None]

    def anchor_tables(self, catalog: Catalog) -> list[str]:
        """Tables this sample is about (used for stratification metadata)."""
        if self.subtask is Subtask.TABLE_OF_COLUMN:
            return catalog.tables_with_column(self.provenance[1])
        if self.subtask is Subtask.JOIN_RELATIONSHIP:
            # provenance holds the left table; the answer names both sides.
            right = self.answer.split(" = ")[1].split(".")[0]
            return sorted({self.provenance[0], right})
        return [self.provenance[0]]

    def key(self) -> str:
        if self.subtask is Subtask.JOIN_RELATIONSHIP:
            # One sample per relationship; the condition is its identity.
            return f"{self.subtask.value}:{self.answer.replace(' ', '')}"
        table, column = self.provenance
        suffix = f"{table}.{column}" if column else table
        return f"{self.subtask.value}:{suffix}"


def load_phrasings(phrasing_dir: str | Path | None = None) -> dict[Subtask, list[str]]:
    """Load one phrasing pool per subtask, from disk or the packaged assets."""
    pools: dict[Subtask, list[str]] = {}
    for subtask in ALL_SUBTASKS:
        if phrasing_dir is not None:
            text = (Path(phrasing_dir) / f"{subtask.value}.txt").read_text(
                encoding="utf-8"
            )
        else:
            text = (
                resources.files("sqlcorpus")
                .joinpath(f"phrasings/{subtask.value}.txt")
                .read_text(encoding="utf-8")
            )
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise ConfigError(f"empty phrasing pool for subtask {subtask.value}")
        pools[subtask] = lines
    return pools


def generate_knowledge(
    catalog: Catalog,
    subtasks=ALL_SUBTASKS,
    seed: int = 0,
    phrasing_dir: str | Path | None = None,
) -> list[KnowledgeSample]:
    """One sample per applicable catalog element per requested subtask.

    Description-based subtasks are skipped with a warning (not an error)
    when the catalog carries no descriptions at all.
    """
    requested = {Subtask(s) for s in subtasks}
    if not requested:
        raise ConfigError("no knowledge subtasks requested")
    pools = load_phrasings(phrasing_dir)
    rng = random.Random(seed)
    samples: list[KnowledgeSample] = []
    for subtask in ALL_SUBTASKS:  # canonical order keeps output deterministic
        if subtask not in requested:
            continue
        if subtask in _DESCRIPTION_SUBTASKS and not _any_descriptions(catalog, subtask):
            logger.warning(
                "subtask %s requested but the catalog has no descriptions; "
                "emitting no samples for it",
                subtask.value,
            )
            continue
        samples.extend(_generate_one(catalog, subtask, pools[subtask], rng))
    return samples


def _any_descriptions(catalog: Catalog, subtask: Subtask) -> bool:
    if subtask is Subtask.DESCRIBE_COLUMN:
        return any(c.description for t in catalog.tables for c in t.columns)
    return any(t.description for t in catalog.tables)


def _phrase(pool: list[str], rng: random.Random, **params) -> str:
    phrasing = rng.choice(pool)
    try:
        return phrasing.format(**params)
    except (KeyError, IndexError) as exc:
        raise ConfigError(
            f"phrasing {phrasing!r} uses unknown placeholder: {exc}"
        ) from exc


def _generate_one(catalog, subtask, pool, rng) -> list[KnowledgeSample]:
    out: list[KnowledgeSample] = []

    if subtask is Subtask.COLUMNS_OF_TABLE:
        for table in catalog.tables:
            out.append(
                KnowledgeSample(
                    subtask=subtask,
                    question=_phrase(pool, rng, table=table.name),
                    answer=", ".join(c.name for c in table.columns),
                    provenance=(table.name, None),
                )
            )
    elif subtask is Subtask.TABLE_FROM_DESCRIPTION:
        for table in catalog.tables:
            if not table.description:
                continue
            out.append(
                KnowledgeSample(
                    subtask=subtask,
                    question=_phrase(pool, rng, description=table.description),
                    answer=table.name,
                    provenance=(table.name, None),
                )
            )
    elif subtask is Subtask.TABLE_OF_COLUMN:
        names = sorted({c.name for t in catalog.tables for c in t.columns})
        for name in names:
            owners = sorted(catalog.tables_with_column(name))
            out.append(
                KnowledgeSample(
                    subtask=subtask,
                    question=_phrase(pool, rng, column=name),
                    answer=", ".join(owners),
                    provenance=(owners[0], name),
                )
            )
    elif subtask is Subtask.DESCRIBE_TABLE:
        for table in catalog.tables:
            if not table.description:
                continue
            out.append(
                KnowledgeSample(
                    subtask=subtask,
                    question=_phrase(pool, rng, table=table.name),
                    answer=table.description,
                    provenance=(table.name, None),
                )
            )
    elif subtask is Subtask.DESCRIBE_COLUMN:
        for table in catalog.tables:
            for col in table.columns:
                if not col.description:
                    continue
                out.append(
                    KnowledgeSample(
                        subtask=subtask,
                        question=_phrase(pool, rng, table=table.name, column=col.name),
                        answer=col.description,
                        provenance=(table.name, col.name),
                    )
                )
    elif subtask is Subtask.COLUMN_DATATYPE:
        for table in catalog.tables:
            for col in table.columns:
                out.append(
                    KnowledgeSample(
                        subtask=subtask,
                        question=_phrase(pool, rng, table=table.name, column=col.name),
                        answer=col.data_type.value,
                        provenance=(table.name, col.name),
                    )
                )
    elif subtask is Subtask.JOIN_RELATIONSHIP:
        for rel in catalog.relationships:
            out.append(
                KnowledgeSample(
                    subtask=subtask,
                    question=_phrase(
                        pool,
                        rng,
                        left_table=rel.left_table,
                        right_table=rel.right_table,
                    ),
                    answer=rel.condition(),
                    provenance=(rel.left_table, None),
                )
            )
    return out
