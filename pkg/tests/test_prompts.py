import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from sqlcorpus.errors import PromptParseError, StructureError, TagCollisionError
from sqlcorpus.prompts import (
    CLAIMER_COT,
    CLAIMER_KNOWLEDGE,
    CLAIMER_SQL,
    COT_INSTRUCTION,
    META_STRUCTURAL_TAGS,
    PromptSample,
    PromptStructure,
    answer_suffix,
    build_system,
    parse,
    render,
    render_prefix,
)

GOLDEN_DIR = FIXTURES / "prompts"

SCHEMA_BLOCK = (
    "CREATE TABLE stores (\n"
    "  store_id integer unique store identifier\n"
    "  region text sales region for reporting\n"
    ")"
)
QUESTION = "What is the total revenue for the north region?"
SQL = (
    "SELECT SUM(s.revenue) FROM sales AS s "
    "JOIN stores AS st ON s.store_id = st.store_id WHERE st.region = 'north'"
)
INSTRUCTION = (
    "1. Join fact tables to dimensions using the declared key columns.\n"
    "2. Default to net revenue unless the question says otherwise."
)
COT_ANSWER = (
    "1. Tables: sales, stores\n"
    "2. Columns: sales.revenue, sales.store_id, stores.store_id, stores.region\n"
    "3. Join columns: sales.store_id = stores.store_id\n"
    f"4. SQL: {SQL}"
)


def golden_sample(structure: PromptStructure) -> PromptSample:
    if structure is PromptStructure.META_SCHEMA:
        return PromptSample(
            question=QUESTION, answer=SQL, structure=structure,
            system=build_system(CLAIMER_SQL, SCHEMA_BLOCK), instruction=INSTRUCTION,
        )
    if structure is PromptStructure.META_COT:
        return PromptSample(
            question=QUESTION, answer=COT_ANSWER, structure=structure,
            system=CLAIMER_COT, instruction=COT_INSTRUCTION,
        )
    if structure is PromptStructure.META_KNOWLEDGE:
        return PromptSample(
            question="Which columns does the table stores contain?",
            answer="store_id, store_name, region, banner, open_date",
            structure=structure, system=CLAIMER_KNOWLEDGE,
        )
    if structure is PromptStructure.BASE_PROMPT_1:
        return PromptSample(
            question=QUESTION, answer=SQL, structure=structure,
            system=build_system(CLAIMER_SQL, SCHEMA_BLOCK), instruction=INSTRUCTION,
        )
    return PromptSample(
        question=QUESTION, answer=SQL, structure=structure, system=SCHEMA_BLOCK,
    )


class TestGoldenFiles:
    @pytest.mark.parametrize("structure", list(PromptStructure))
    def test_render_matches_checked_in_bytes(self, structure):
        rendered = render(golden_sample(structure))
        golden = (GOLDEN_DIR / f"{structure.value}.txt").read_bytes()
        assert rendered.encode("utf-8") == golden

    def test_knowledge_prompt_shape(self):
        text = render(golden_sample(PromptStructure.META_KNOWLEDGE))
        assert "<system>" in text
        assert "metadata knowledge assistant" in text
        assert "<instruction>" not in text

    def test_base_prompt_2_shape(self):
        text = render(golden_sample(PromptStructure.BASE_PROMPT_2))
        assert text.count("[Schema] ") == 1
        assert text.count("[Question] ") == 1
        assert text.count("[Answer] ") == 1
        assert "<s>" not in text

    def test_meta_blocks_all_closed(self):
        for structure in (
            PromptStructure.META_SCHEMA,
            PromptStructure.META_COT,
            PromptStructure.META_KNOWLEDGE,
        ):
            text = render(golden_sample(structure))
            open_tags = sum(
                text.count(f"{tag}\n")
                for tag in ("<system>", "<instruction>", "<question>", "<answer>")
            )
            assert text.count("<end>") == open_tags
            assert text.startswith("<s>\n")
            assert text.endswith("</s>\n")


class TestRoundTrip:
    @pytest.mark.parametrize("structure", list(PromptStructure))
    def test_parse_inverts_render(self, structure):
        sample = golden_sample(structure)
        parsed = parse(render(sample), structure)
        assert parsed.system == sample.system
        assert parsed.instruction == sample.instruction
        assert parsed.question == sample.question
        assert parsed.answer == sample.answer

    @pytest.mark.parametrize("structure", list(PromptStructure))
    def test_prefix_plus_answer_plus_suffix_is_render(self, structure):
        sample = golden_sample(structure)
        assert (
            render_prefix(sample) + sample.answer + answer_suffix(structure)
            == render(sample)
        )


# Content free of structural tags and, for the baseline structures, of the
# bracketed line markers.
_FORBIDDEN = list(META_STRUCTURAL_TAGS) + [
    "[INST]", "[/INST]", "<<SYS>>", "<</SYS>>",
    "[Schema] ", "[Question] ", "[Answer] ",
]
_content = st.text(min_size=0, max_size=60).filter(
    lambda s: not any(tag in s for tag in _FORBIDDEN)
)
_line = _content.filter(lambda s: "\n" not in s)


@settings(max_examples=200, deadline=None)
@given(
    structure=st.sampled_from(list(PromptStructure)),
    system=_content,
    instruction=_content,
    question=_line,
    answer=_content,
)
def test_round_trip_property(structure, system, instruction, question, answer):
    takes_instruction = structure in (
        PromptStructure.META_SCHEMA,
        PromptStructure.META_COT,
        PromptStructure.BASE_PROMPT_1,
    )
    sample = PromptSample(
        question=question,
        answer=answer,
        structure=structure,
        system=system,
        instruction=instruction if takes_instruction else None,
    )
    parsed = parse(render(sample), structure)
    assert (parsed.system, parsed.instruction, parsed.question, parsed.answer) == (
        sample.system,
        sample.instruction,
        sample.question,
        sample.answer,
    )


class TestErrors:
    def test_tag_collision_in_answer(self):
        sample = PromptSample(
            question="q",
            answer="bad <end> here",
            structure=PromptStructure.META_KNOWLEDGE,
            system=CLAIMER_KNOWLEDGE,
        )
        with pytest.raises(TagCollisionError):
            render(sample)

    def test_missing_instruction_is_structure_error(self):
        sample = PromptSample(
            question="q", answer="a",
            structure=PromptStructure.META_SCHEMA, system="s",
        )
        with pytest.raises(StructureError):
            render(sample)

    def test_knowledge_rejects_instruction(self):
        sample = PromptSample(
            question="q", answer="a",
            structure=PromptStructure.META_KNOWLEDGE, system="s", instruction="i",
        )
        with pytest.raises(StructureError):
            render(sample)

    def test_base1_requires_single_line_question(self):
        sample = PromptSample(
            question="line one\nline two", answer="a",
            structure=PromptStructure.BASE_PROMPT_1, system="s", instruction="i",
        )
        with pytest.raises(StructureError):
            render(sample)

    def test_truncated_text_fails_with_offset(self):
        sample = golden_sample(PromptStructure.META_SCHEMA)
        text = render(sample)
        truncated = text[: text.index("<answer>")]
        with pytest.raises(PromptParseError):
            parse(truncated, PromptStructure.META_SCHEMA)

    def test_wrong_leading_tag_offset_zero(self):
        with pytest.raises(PromptParseError) as excinfo:
            parse("<bogus>", PromptStructure.META_SCHEMA)
        assert excinfo.value.offset == 0

    def test_trailing_garbage_rejected(self):
        sample = golden_sample(PromptStructure.META_KNOWLEDGE)
        with pytest.raises(PromptParseError):
            parse(render(sample) + "extra", PromptStructure.META_KNOWLEDGE)
