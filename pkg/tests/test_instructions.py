import collections

import pytest

from sqlcorpus.errors import DiversificationError, PoolSizeError
from sqlcorpus.instructions import InstructionPool, assign_instructions, build_pool
from sqlcorpus.prompts import PromptSample, PromptStructure

BASE = "Answer with a single SQL statement."


class FakeClient:
    """Scripted rephrase client; replays a canned list of responses."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = 0

    def rephrase(self, instruction: str) -> str:
        self.calls += 1
        if not self.responses:
            raise DiversificationError("script exhausted")
        return self.responses.pop(0)


class TestBuildPool:
    def test_degenerate_pool(self):
        pool = build_pool(BASE, 1, None)
        assert pool.variants == (BASE,)
        assert pool.size == 1

    def test_static_file_pool(self):
        text = "\n".join(f"variant {i}" for i in range(6)) + "\n"
        pool = build_pool(BASE, 5, text)
        assert pool.size == 5
        assert len(set(pool.variants)) == 5
        assert pool.variants[0] == BASE
        assert pool.provenance == "static_file"

    def test_static_file_too_small(self):
        with pytest.raises(PoolSizeError):
            build_pool(BASE, 5, "only one\nonly two\n")

    def test_static_file_skips_duplicates_of_base(self):
        text = f"{BASE}\nfresh one\nfresh two\n"
        pool = build_pool(BASE, 3, text)
        assert pool.variants == (BASE, "fresh one", "fresh two")

    def test_client_pool_retries_duplicates(self):
        client = FakeClient(["v1", "v1", "v1", "v2", "v3"])
        pool = build_pool(BASE, 4, client, retry_budget=3)
        assert pool.variants == (BASE, "v1", "v2", "v3")
        assert pool.provenance == "llm"

    def test_client_pool_shrinks_after_retry_budget(self, caplog):
        client = FakeClient(["v1"] + ["v1"] * 10)
        with caplog.at_level("WARNING"):
            pool = build_pool(BASE, 4, client, retry_budget=3)
        assert pool.variants == (BASE, "v1")
        assert "shrinking pool" in caplog.text

    def test_no_source_for_k_above_one(self):
        with pytest.raises(DiversificationError):
            build_pool(BASE, 3, None)

    def test_pool_invariants(self):
        with pytest.raises(PoolSizeError):
            InstructionPool(BASE, (BASE, BASE), "llm")
        with pytest.raises(PoolSizeError):
            InstructionPool(BASE, ("not base",), "llm")


def _drafts(n):
    return [
        PromptSample(
            question=f"q{i}",
            answer=f"a{i}",
            structure=PromptStructure.META_SCHEMA,
            system="sys",
            instruction="",
            meta={"sample_id": f"s{i}", "task_type": "schema"},
        )
        for i in range(n)
    ]


class TestAssign:
    def test_single_variant_assigns_base_everywhere(self):
        pool = build_pool(BASE, 1, None)
        out = assign_instructions(_drafts(20), pool, seed=5)
        assert all(s.instruction == BASE for s in out)
        assert all(s.meta["instruction_variant"] == 0 for s in out)

    def test_deterministic_under_fixed_seed(self):
        pool = build_pool(BASE, 4, "v1\nv2\nv3\n")
        first = assign_instructions(_drafts(500), pool, seed=42)
        second = assign_instructions(_drafts(500), pool, seed=42)
        assert first == second
        third = assign_instructions(_drafts(500), pool, seed=43)
        assert first != third

    def test_count_preserved_and_membership(self):
        pool = build_pool(BASE, 3, "v1\nv2\n")
        drafts = _drafts(137)
        out = assign_instructions(drafts, pool, seed=0)
        assert len(out) == len(drafts)
        assert all(s.instruction in pool.variants for s in out)

    def test_uniform_frequencies_at_ten_thousand(self):
        # 4 variants, 10,000 samples: each frequency lands in [0.20, 0.30].
        pool = build_pool(BASE, 4, "v1\nv2\nv3\n")
        out = assign_instructions(_drafts(10_000), pool, seed=99)
        counts = collections.Counter(s.instruction for s in out)
        assert set(counts) == set(pool.variants)
        for variant in pool.variants:
            assert 0.20 <= counts[variant] / 10_000 <= 0.30

    def test_original_drafts_untouched(self):
        pool = build_pool(BASE, 2, "v1\n")
        drafts = _drafts(3)
        assign_instructions(drafts, pool, seed=1)
        assert all(s.instruction == "" for s in drafts)
