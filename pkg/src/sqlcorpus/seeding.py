"""Stage-level seed derivation from the single pipeline seed."""

from __future__ import annotations

import hashlib


def derive_seed(master_seed: int, stage: str) -> int:
    """Stable 63-bit seed for one named stage of the pipeline.

    Hash-derived so stages stay independent: inserting a stage never shifts
    the randomness of the others.
    """
    digest = hashlib.sha256(f"{master_seed}:{stage}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
