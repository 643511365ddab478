import pytest

from sqlcorpus.corpus import (
    Corpus,
    assemble,
    read_corpus,
    split_balanced,
    split_train_test,
    subset_ladder,
    write_corpus,
)
from sqlcorpus.cot import analyze_sql, build_cot_answer
from sqlcorpus.errors import LadderError, StratificationError
from sqlcorpus.instructions import build_pool
from sqlcorpus.knowledge import generate_knowledge
from sqlcorpus.prompts import PromptSample, PromptStructure
from sqlcorpus.templates import expand

POOL = build_pool(
    "1. Join on declared keys.\n2. Default to net revenue.",
    4,
    "v one\nv two\nv three\n",
)


@pytest.fixture(scope="module")
def small_qa(fixture_inputs):
    import dataclasses

    templates, metrics, filters = fixture_inputs
    # Two metrics x two filters over two templates keeps assembly small.
    metrics = [m for m in metrics if m.id in ("m_total_revenue", "m_total_units")]
    keep_filters = {"f_store_001", "f_store_002", "f_prod_001", "f_prod_002"}
    filters = [f for f in filters if f.id in keep_filters]
    trimmed = []
    for t in templates:
        if t.template_id not in ("t_store", "t_product"):
            continue
        wanted = [fid for fid in t.applicable_filters if fid in keep_filters]
        trimmed.append(dataclasses.replace(t, applicable_filters=tuple(wanted)))
    return expand(trimmed, metrics, filters)


@pytest.fixture(scope="module")
def small_corpus(small_qa, fixture_catalog):
    cot = {
        p.key(): build_cot_answer(p.answer_sql, analyze_sql(p.answer_sql, fixture_catalog))
        for p in small_qa
    }
    knowledge = generate_knowledge(fixture_catalog, seed=5)
    return assemble(
        small_qa,
        fixture_catalog,
        POOL,
        seed=77,
        cot=cot,
        knowledge=knowledge,
    )


class TestAssemble:
    def test_schema_only_is_one_to_one(self, small_qa, fixture_catalog):
        built = assemble(small_qa, fixture_catalog, POOL, seed=1)
        assert len(built) == len(small_qa)
        assert all(
            s.structure is PromptStructure.META_SCHEMA for s in built.samples
        )

    def test_counting_law_with_all_families(self, small_corpus, small_qa, fixture_catalog):
        n_knowledge = len(generate_knowledge(fixture_catalog, seed=5))
        assert len(small_corpus) == 2 * len(small_qa) + n_knowledge

    def test_instructions_come_from_pool(self, small_corpus):
        for sample in small_corpus.samples:
            if sample.meta["task_type"] == "schema":
                assert sample.instruction in POOL.variants
                assert sample.meta["instruction_variant"] < POOL.size

    def test_cot_samples_carry_fixed_reasoning_instruction(self, small_corpus):
        from sqlcorpus.prompts import COT_INSTRUCTION

        cot = [s for s in small_corpus.samples if s.meta["task_type"] == "cot"]
        assert cot
        assert all(s.instruction == COT_INSTRUCTION for s in cot)

    def test_schema_block_present_for_schema_family(self, small_corpus):
        schema = [s for s in small_corpus.samples if s.meta["task_type"] == "schema"]
        for sample in schema:
            assert "CREATE TABLE" in sample.system
            assert sample.meta["schema_mode"] == "exact"

    def test_knowledge_samples_have_no_instruction(self, small_corpus):
        kn = [s for s in small_corpus.samples if s.meta["task_type"] == "knowledge"]
        assert kn
        assert all(s.instruction is None for s in kn)

    def test_deterministic(self, small_qa, fixture_catalog):
        one = assemble(small_qa, fixture_catalog, POOL, seed=9)
        two = assemble(small_qa, fixture_catalog, POOL, seed=9)
        assert one.samples == two.samples

    def test_base_prompt_2_has_bare_schema_system(self, small_qa, fixture_catalog):
        built = assemble(
            small_qa,
            fixture_catalog,
            POOL,
            seed=2,
            structures={"schema": PromptStructure.BASE_PROMPT_2},
        )
        sample = built.samples[0]
        assert sample.system.startswith("CREATE TABLE")
        assert sample.instruction is None


class TestSerialization:
    def test_round_trip(self, small_corpus, tmp_path):
        path = tmp_path / "corpus.jsonl"
        write_corpus(small_corpus, path)
        loaded = read_corpus(path)
        assert loaded.samples == small_corpus.samples
        assert loaded.generation_config == small_corpus.generation_config
        assert loaded.split == small_corpus.split

    def test_writes_are_byte_deterministic(self, small_corpus, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_corpus(small_corpus, a)
        write_corpus(small_corpus, b)
        assert a.read_bytes() == b.read_bytes()

    def test_samples_sorted_by_id(self, small_corpus):
        ids = small_corpus.ids()
        assert ids == sorted(ids)


def _tagged_corpus(n_per_stratum: dict) -> Corpus:
    samples = []
    for stratum, count in n_per_stratum.items():
        for i in range(count):
            samples.append(
                PromptSample(
                    question=f"q {stratum} {i}",
                    answer=f"a {i}",
                    structure=PromptStructure.META_KNOWLEDGE,
                    system="s",
                    meta={
                        "sample_id": f"{stratum}:{i:04d}",
                        "task_type": "knowledge",
                        "anchor_tables": [stratum],
                    },
                )
            )
    return Corpus(samples=sorted(samples, key=lambda s: s.meta["sample_id"]))


class TestSplitBalanced:
    def test_exact_quotas(self):
        corpus = _tagged_corpus({"a": 120, "b": 140, "c": 130, "d": 110, "e": 150})
        train, test = split_balanced(corpus, 500, seed=3)
        from collections import Counter

        per = Counter(s.meta["anchor_tables"][0] for s in test.samples)
        assert per == {"a": 100, "b": 100, "c": 100, "d": 100, "e": 100}
        assert len(train) + len(test) == 650
        assert set(train.ids()).isdisjoint(test.ids())

    def test_single_stratum_plain_split(self):
        corpus = _tagged_corpus({"only": 50})
        train, test = split_balanced(corpus, 20, seed=1)
        assert len(test) == 20
        assert len(train) == 30

    def test_remainder_goes_to_first_strata(self):
        corpus = _tagged_corpus({"a": 10, "b": 10, "c": 10})
        _, test = split_balanced(corpus, 7, seed=0)
        from collections import Counter

        per = Counter(s.meta["anchor_tables"][0] for s in test.samples)
        assert per == {"a": 3, "b": 2, "c": 2}

    def test_small_stratum_raises_naming_it(self):
        corpus = _tagged_corpus({"a": 100, "tiny": 2})
        with pytest.raises(StratificationError, match="tiny"):
            split_balanced(corpus, 10, seed=0)

    def test_deterministic(self):
        corpus = _tagged_corpus({"a": 30, "b": 30})
        first = split_balanced(corpus, 10, seed=8)
        second = split_balanced(corpus, 10, seed=8)
        assert first[1].ids() == second[1].ids()
        assert split_balanced(corpus, 10, seed=9)[1].ids() != first[1].ids()

    def test_split_labels(self):
        corpus = _tagged_corpus({"a": 30})
        train, test = split_balanced(corpus, 10, seed=0)
        assert (train.split, test.split) == ("train", "test")


class TestSplitTrainTest:
    def test_test_side_is_schema_family_only(self, small_corpus):
        train, test = split_train_test(small_corpus, 8, seed=4)
        assert all(s.meta["task_type"] == "schema" for s in test.samples)
        assert len(test) == 8

    def test_no_reasoning_leak_for_test_pairs(self, small_corpus):
        train, test = split_train_test(small_corpus, 8, seed=4)
        test_keys = {s.meta["sample_id"].split(":", 1)[1] for s in test.samples}
        for sample in train.samples:
            if sample.meta["task_type"] == "cot":
                assert sample.meta["sample_id"].split(":", 1)[1] not in test_keys

    def test_knowledge_stays_in_train(self, small_corpus):
        train, _ = split_train_test(small_corpus, 8, seed=4)
        kn = [s for s in train.samples if s.meta["task_type"] == "knowledge"]
        assert len(kn) == len(
            [s for s in small_corpus.samples if s.meta["task_type"] == "knowledge"]
        )


class TestLadder:
    def test_nested_subsets(self):
        corpus = _tagged_corpus({"a": 60})
        corpus.split = "train"
        subsets = subset_ladder(corpus, [10, 25, 50], seed=6)
        ids = [set(c.ids()) for c in subsets]
        assert len(ids[0]) == 10 and len(ids[1]) == 25 and len(ids[2]) == 50
        assert ids[0] <= ids[1] <= ids[2]

    def test_identity_subset(self):
        corpus = _tagged_corpus({"a": 40})
        (subset,) = subset_ladder(corpus, [40], seed=0)
        assert subset.ids() == corpus.ids()

    def test_oversized_request_rejected(self):
        corpus = _tagged_corpus({"a": 5})
        with pytest.raises(LadderError):
            subset_ladder(corpus, [6], seed=0)

    def test_deterministic(self):
        corpus = _tagged_corpus({"a": 60})
        first = subset_ladder(corpus, [10], seed=2)[0].ids()
        second = subset_ladder(corpus, [10], seed=2)[0].ids()
        assert first == second
