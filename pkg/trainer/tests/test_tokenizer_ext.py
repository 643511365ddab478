import pytest

from sqltrainer.config import validate_manifest
from sqltrainer.tokenizer_ext import TokenCollisionError, extend_tokenizer
from sqltrainer.toy import build_word_tokenizer, load_corpus_texts


@pytest.fixture(scope="module")
def tokenizer(corpus_path):
    return build_word_tokenizer(load_corpus_texts(corpus_path))


class TestExtend:
    def test_grows_by_genuinely_new_tokens(self, tokenizer, manifest_path):
        manifest = validate_manifest(manifest_path)
        vocab = tokenizer.get_vocab()
        expected_new = len(
            [
                t
                for t in manifest["special_tokens"] + manifest["added_tokens"]
                if t not in vocab
            ]
        )
        before = len(tokenizer)
        added = extend_tokenizer(tokenizer, manifest)
        assert added == expected_new
        assert len(tokenizer) == before + added

    def test_idempotent(self, tokenizer, manifest_path):
        manifest = validate_manifest(manifest_path)
        size = len(tokenizer)
        assert extend_tokenizer(tokenizer, manifest) == 0
        assert len(tokenizer) == size

    def test_structural_tags_become_special(self, corpus_path, manifest_path):
        fresh = build_word_tokenizer(load_corpus_texts(corpus_path))
        manifest = validate_manifest(manifest_path)
        extend_tokenizer(fresh, manifest)
        for tag in manifest["special_tokens"]:
            assert tag in fresh.all_special_tokens
            # A special token must encode as one id, never be split apart.
            assert len(fresh.encode(tag, add_special_tokens=False)) == 1

    def test_metadata_collision_halts(self, corpus_path):
        fresh = build_word_tokenizer(load_corpus_texts(corpus_path))
        manifest = {
            "special_tokens": ["<s>"],
            "added_tokens": ["<unk>"],  # already the tokenizer's unk special
            "source_catalog_hash": "x",
        }
        with pytest.raises(TokenCollisionError, match="<unk>"):
            extend_tokenizer(fresh, manifest)
