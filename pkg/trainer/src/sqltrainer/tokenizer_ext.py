"""Extend a tokenizer's vocabulary from a token manifest.

Structural tags register as additional special tokens, table/column names
as plain added tokens. The operation is idempotent (re-applying the same
manifest adds nothing) and refuses manifests whose metadata tokens collide
with the tokenizer's existing special tokens.
"""

from __future__ import annotations


class TokenCollisionError(RuntimeError):
    """A metadata token collides with an existing special token."""


def extend_tokenizer(tokenizer, manifest: dict) -> int:
    """Add the manifest's tokens to ``tokenizer``; returns how many were new.

    ``manifest`` is the parsed token-manifest document with
    ``special_tokens`` and ``added_tokens`` lists.
    """
    structural = list(manifest["special_tokens"])
    metadata = list(manifest["added_tokens"])

    special_now = set(tokenizer.all_special_tokens)
    collisions = sorted(set(metadata) & special_now)
    if collisions:
        raise TokenCollisionError(
            "metadata token(s) already registered as special tokens: "
            + ", ".join(collisions)
        )

    # The framework's add_* return values count re-registrations of tokens the
    # vocabulary already holds; the honest growth is the length delta.
    before = len(tokenizer)
    tokenizer.add_special_tokens({"additional_special_tokens": structural})
    tokenizer.add_tokens(metadata)
    return len(tokenizer) - before
