"""Instruction variant pools and seeded assignment across a corpus.

A pool holds one base instruction plus rephrased variants, built either by
an HTTP rephrasing service or from a newline-delimited text file so the
pipeline stays runnable offline. The pool is built once (it is tiny next to
the corpus) and variants are assigned to samples by uniform seeded sampling
with replacement.
"""

from __future__ import annotations

import dataclasses
import logging
import random
from dataclasses import dataclass

from .errors import DiversificationError, PoolSizeError

logger = logging.getLogger(__name__)

DEFAULT_REPHRASE_PREAMBLE = (
    "Rephrase the following instruction once, keeping its meaning. "
    "Reply with the rephrased instruction only."
)


@dataclass(frozen=True)
class InstructionPool:
    base_instruction: str
    variants: tuple[str, ...]
    provenance: str  # "llm" | "static_file"

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        if not self.variants:
            raise PoolSizeError("instruction pool must hold at least one variant")
        if self.variants[0] != self.base_instruction:
            raise PoolSizeError("variant 0 must be the base instruction")
        if len(set(self.variants)) != len(self.variants):
            raise PoolSizeError("instruction pool variants must be pairwise distinct")
        if self.provenance not in ("llm", "static_file"):
            raise PoolSizeError(f"unknown pool provenance {self.provenance!r}")

    @property
    def size(self) -> int:
        return len(self.variants)


class RephraseClient:
    """Single request/response client for an instruction rephrasing endpoint.

    POSTs ``{"model": ..., "prompt": "<preamble>\\n\\n<instruction>"}`` and
    expects ``{"text": ...}`` back; the reply is trimmed to its first line.
    """

    def __init__(
        self,
        endpoint: str,
        model: str = "default",
        preamble: str = DEFAULT_REPHRASE_PREAMBLE,
        timeout: float = 30.0,
        token: str | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.preamble = preamble
        self.timeout = timeout
        self.token = token

    def rephrase(self, instruction: str) -> str:
        import requests

        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        try:
            response = requests.post(
                self.endpoint,
                json={
                    "model": self.model,
                    "prompt": f"{self.preamble}\n\n{instruction}",
                },
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            payload = response.json()
        except Exception as exc:
            raise DiversificationError(
                f"rephrase client at {self.endpoint} failed: {exc}"
            ) from exc
        if "text" not in payload:
            raise DiversificationError(
                f"rephrase client at {self.endpoint} returned no 'text' field"
            )
        return str(payload["text"]).strip().splitlines()[0].strip()


def build_pool(
    base_instruction: str,
    k: int,
    source,
    retry_budget: int = 3,
) -> InstructionPool:
    """Build a pool of ``k`` distinct variants (the base counts as one).

    ``source`` is either an object with a ``rephrase(text) -> str`` method or
    a static variant file's text content. When a client keeps returning
    duplicates past the retry budget the pool is shrunk with a warning rather
    than failing the run.
    """
    if k < 1:
        raise PoolSizeError(f"pool size must be >= 1, got {k}")
    if source is None and k > 1:
        raise DiversificationError(
            "no rephrase client and no static variant file configured"
        )
    variants = [base_instruction]
    if k == 1:
        provenance = "static_file" if isinstance(source, str) else "llm"
        return InstructionPool(base_instruction, tuple(variants), provenance)

    if isinstance(source, str):
        candidates = [
            line.strip() for line in source.splitlines() if line.strip()
        ]
        for line in candidates:
            if line not in variants:
                variants.append(line)
            if len(variants) == k:
                break
        if len(variants) < k:
            raise PoolSizeError(
                f"static variant file holds {len(variants) - 1} distinct "
                f"variants, need {k - 1}"
            )
        return InstructionPool(base_instruction, tuple(variants), "static_file")

    misses = 0
    while len(variants) < k:
        candidate = source.rephrase(base_instruction)
        if candidate and candidate not in variants:
            variants.append(candidate)
            misses = 0
        else:
            misses += 1
            if misses > retry_budget:
                logger.warning(
                    "rephrase client produced duplicates %d times in a row; "
                    "shrinking pool from %d to %d",
                    misses,
                    k,
                    len(variants),
                )
                break
    return InstructionPool(base_instruction, tuple(variants), "llm")


def assign_instructions(samples: list, pool: InstructionPool, seed: int) -> list:
    """Replace each sample's instruction with a uniformly sampled variant.

    Deterministic given (sample order, pool, seed); sample count is
    preserved. Each returned sample records its variant index in
    ``meta["instruction_variant"]``.
    """
    rng = random.Random(seed)
    assigned = []
    for sample in samples:
        index = rng.randrange(pool.size)
        meta = dict(sample.meta)
        meta["instruction_variant"] = index
        assigned.append(
            dataclasses.replace(sample, instruction=pool.variants[index], meta=meta)
        )
    return assigned
