"""Render samples into the five training prompt structures, byte-exactly.

Three tag-delimited structures share one layout family (schema, reasoning,
and metadata-knowledge prompts differ only in their system block and in
whether an instruction block exists). The two baseline structures use
``[INST]``/``<<SYS>>`` wrappers and ``[Schema]``/``[Question]``/``[Answer]``
line prefixes. Rendering is deterministic down to the byte: golden fixture
files freeze the canonical form, and ``parse`` inverts ``render`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import PromptParseError, StructureError, TagCollisionError


class PromptStructure(str, Enum):
    META_SCHEMA = "meta_schema"
    META_COT = "meta_cot"
    META_KNOWLEDGE = "meta_knowledge"
    BASE_PROMPT_1 = "base_prompt_1"
    BASE_PROMPT_2 = "base_prompt_2"


# Tag vocabulary of the tag-delimited structures, in document order. The
# token manifest registers exactly these.
META_STRUCTURAL_TAGS = (
    "<s>",
    "<system>",
    "<instruction>",
    "<question>",
    "<answer>",
    "<end>",
    "</s>",
)

_BASE1_TAGS = ("<s>", "</s>", "[INST]", "[/INST]", "<<SYS>>", "<</SYS>>")
_BASE2_TAGS = ("[Schema] ", "[Question] ", "[Answer] ")

CLAIMER_SQL = "Assistant claimer: SQL expert"
CLAIMER_COT = "Assistant claimer: CoT SQL expert"
CLAIMER_KNOWLEDGE = "Assistant claimer: metadata knowledge assistant"

# Fixed instruction block of reasoning-style prompts: the four derivation
# steps a trained model is asked to follow.
COT_INSTRUCTION = (
    "1. identify the related tables\n"
    "2. identify the columns used to solve the question\n"
    "3. identify the columns to join the tables\n"
    "4. generate SQL to solve the question"
)

_META_STRUCTURES = {
    PromptStructure.META_SCHEMA,
    PromptStructure.META_COT,
    PromptStructure.META_KNOWLEDGE,
}


def build_system(claimer: str, schema_block: str | None = None) -> str:
    """Compose a system block: assistant claimer plus optional schema text."""
    if schema_block:
        return f"{claimer}\nSchema: {schema_block}"
    return claimer


@dataclass(frozen=True)
class PromptSample:
    question: str
    answer: str
    structure: PromptStructure
    system: str | None = None
    instruction: str | None = None
    meta: dict = field(default_factory=dict)


def _structure_tags(structure: PromptStructure) -> tuple[str, ...]:
    if structure in _META_STRUCTURES:
        return META_STRUCTURAL_TAGS
    if structure is PromptStructure.BASE_PROMPT_1:
        return _BASE1_TAGS
    return _BASE2_TAGS


def _check_fields(sample: PromptSample) -> None:
    structure = PromptStructure(sample.structure)
    if sample.system is None:
        raise StructureError(f"{structure.value} requires a system block")
    takes_instruction = structure in (
        PromptStructure.META_SCHEMA,
        PromptStructure.META_COT,
        PromptStructure.BASE_PROMPT_1,
    )
    if takes_instruction and sample.instruction is None:
        raise StructureError(f"{structure.value} requires an instruction block")
    if not takes_instruction and sample.instruction is not None:
        raise StructureError(f"{structure.value} takes no instruction block")
    if structure is PromptStructure.BASE_PROMPT_1 and "\n" in sample.question:
        raise StructureError(
            f"{structure.value} requires a single-line question"
        )
    tags = _structure_tags(structure)
    named = [
        ("system", sample.system),
        ("instruction", sample.instruction),
        ("question", sample.question),
        ("answer", sample.answer),
    ]
    for field_name, content in named:
        if content is None:
            continue
        for tag in tags:
            if tag in content:
                raise TagCollisionError(
                    f"{field_name} content contains structural tag {tag!r}"
                )


def render_prefix(sample: PromptSample) -> str:
    """Everything up to (and excluding) the answer content.

    This is the generation prompt at inference time: the answer tag is
    present, its content is not.
    """
    _check_fields(sample)
    structure = PromptStructure(sample.structure)
    if structure in _META_STRUCTURES:
        parts = [f"<s>\n<system>\n{sample.system}\n<end>\n"]
        if structure is not PromptStructure.META_KNOWLEDGE:
            parts.append(f"<instruction>\n{sample.instruction}\n<end>\n")
        parts.append(f"<question>\n{sample.question}\n<end>\n<answer>\n")
        return "".join(parts)
    if structure is PromptStructure.BASE_PROMPT_1:
        return (
            f"<s>[INST]\n<<SYS>>\n{sample.system}\n<</SYS>>\n"
            f"Instructions:\n{sample.instruction}\n{sample.question}\n[/INST]\n"
        )
    return f"[Schema] {sample.system}\n[Question] {sample.question}\n[Answer] "


def answer_suffix(structure: PromptStructure) -> str:
    """The bytes that close a prompt after the answer content."""
    structure = PromptStructure(structure)
    if structure in _META_STRUCTURES:
        return "\n<end>\n</s>\n"
    if structure is PromptStructure.BASE_PROMPT_1:
        return "\n</s>\n"
    return "\n"


def render(sample: PromptSample) -> str:
    """Full training-time text: prefix, answer content, closing bytes."""
    return render_prefix(sample) + sample.answer + answer_suffix(sample.structure)


def parse(text: str, structure: PromptStructure) -> PromptSample:
    """Invert ``render``: recover the block contents of a rendered prompt."""
    structure = PromptStructure(structure)
    if structure in _META_STRUCTURES:
        return _parse_meta(text, structure)
    if structure is PromptStructure.BASE_PROMPT_1:
        return _parse_base1(text)
    return _parse_base2(text)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def literal(self, expected: str) -> None:
        if not self.text.startswith(expected, self.pos):
            raise PromptParseError(f"expected {expected!r}", self.pos)
        self.pos += len(expected)

    def until(self, marker: str) -> str:
        idx = self.text.find(marker, self.pos)
        if idx < 0:
            raise PromptParseError(f"missing {marker!r}", self.pos)
        content = self.text[self.pos : idx]
        self.pos = idx + len(marker)
        return content

    def rest(self) -> str:
        return self.text[self.pos :]

    def done(self) -> None:
        if self.pos != len(self.text):
            raise PromptParseError("trailing content after prompt", self.pos)


def _parse_meta(text: str, structure: PromptStructure) -> PromptSample:
    cur = _Cursor(text)
    cur.literal("<s>\n<system>\n")
    system = cur.until("\n<end>\n")
    instruction = None
    if structure is not PromptStructure.META_KNOWLEDGE:
        cur.literal("<instruction>\n")
        instruction = cur.until("\n<end>\n")
    cur.literal("<question>\n")
    question = cur.until("\n<end>\n")
    cur.literal("<answer>\n")
    answer = cur.until("\n<end>\n")
    cur.literal("</s>\n")
    cur.done()
    return PromptSample(
        question=question,
        answer=answer,
        structure=structure,
        system=system,
        instruction=instruction,
    )


def _parse_base1(text: str) -> PromptSample:
    cur = _Cursor(text)
    cur.literal("<s>[INST]\n<<SYS>>\n")
    system = cur.until("\n<</SYS>>\nInstructions:\n")
    middle = cur.until("\n[/INST]\n")
    if "\n" not in middle:
        raise PromptParseError("missing question line before [/INST]", cur.pos)
    instruction, question = middle.rsplit("\n", 1)
    answer = cur.until("\n</s>\n")
    cur.done()
    return PromptSample(
        question=question,
        answer=answer,
        structure=PromptStructure.BASE_PROMPT_1,
        system=system,
        instruction=instruction,
    )


def _parse_base2(text: str) -> PromptSample:
    cur = _Cursor(text)
    cur.literal("[Schema] ")
    system = cur.until("\n[Question] ")
    question = cur.until("\n[Answer] ")
    answer = cur.rest()
    if not answer.endswith("\n"):
        raise PromptParseError("answer must end with a newline", len(text))
    return PromptSample(
        question=question,
        answer=answer[:-1],
        structure=PromptStructure.BASE_PROMPT_2,
        system=system,
        instruction=None,
    )
