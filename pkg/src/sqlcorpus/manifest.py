"""Tokenizer-extension manifest: structural tags plus metadata tokens.

The manifest lists the structural tags used by the tag-delimited prompt
structures as special tokens, and (optionally) every table and distinct
column name of the catalog as added tokens, verbatim. Downstream trainers
extend their tokenizer vocabulary from this file so both the prompt
skeleton and schema names become atomic tokens.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .catalog import Catalog, emit_catalog
from .errors import ManifestCollisionError
from .prompts import META_STRUCTURAL_TAGS


@dataclass(frozen=True)
class TokenManifest:
    structural_tags: tuple[str, ...]
    metadata_tokens: tuple[str, ...]
    source_catalog_hash: str

    def __post_init__(self):
        combined = list(self.structural_tags) + list(self.metadata_tokens)
        if len(set(combined)) != len(combined):
            raise ManifestCollisionError("manifest contains duplicate token strings")

    def to_json(self) -> str:
        doc = {
            "special_tokens": list(self.structural_tags),
            "added_tokens": list(self.metadata_tokens),
            "source_catalog_hash": self.source_catalog_hash,
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TokenManifest":
        doc = json.loads(text)
        return cls(
            structural_tags=tuple(doc["special_tokens"]),
            metadata_tokens=tuple(doc["added_tokens"]),
            source_catalog_hash=doc["source_catalog_hash"],
        )


def catalog_hash(catalog: Catalog) -> str:
    """SHA-256 over the canonical catalog document serialization."""
    return hashlib.sha256(emit_catalog(catalog).encode("utf-8")).hexdigest()


def build_manifest(catalog: Catalog, include_metadata: bool = True) -> TokenManifest:
    """Assemble the manifest deterministically from one catalog.

    Metadata tokens are every table name followed by every distinct column
    name, each exactly once, both groups alphabetical. A catalog name that
    collides with a structural tag must be renamed in the catalog.
    """
    metadata: list[str] = []
    if include_metadata:
        tables = sorted(t.name for t in catalog.tables)
        columns = sorted({c.name for t in catalog.tables for c in t.columns})
        # A column sharing a table's name is still one token.
        metadata = tables + [c for c in columns if c not in set(tables)]
        offenders = set(metadata) & set(META_STRUCTURAL_TAGS)
        if offenders:
            raise ManifestCollisionError(
                "catalog name(s) collide with structural tags: "
                + ", ".join(sorted(offenders))
                + " (rename them in the catalog)"
            )
    return TokenManifest(
        structural_tags=META_STRUCTURAL_TAGS,
        metadata_tokens=tuple(metadata),
        source_catalog_hash=catalog_hash(catalog),
    )
