"""分词、词表与拼接测试"""
import pytest

from core.errors import DataError, TokenizationError
from core.text import (
    CLS_ID, PAD_ID, SEP_ID, SPECIAL_TOKENS, UNK_ID, EventText, TokenSequence, Vocabulary,
    concatenate, pack_pair, tokenize
)


@pytest.fixture
def vocab():
    return Vocabulary.build(["Fire starts.", "Wind blows.", "House burns."])


class TestVocabulary:

    def test_specials_fixed(self, vocab):
        assert vocab.tokens[:4] == list(SPECIAL_TOKENS)
        assert vocab.id_of("[CLS]") == CLS_ID
        assert vocab.id_of("[SEP]") == SEP_ID

    def test_bijective(self, vocab):
        for i, token in enumerate(vocab.tokens):
            assert vocab.id_of(token) == i
            assert vocab.token_of(i) == token

    def test_frequency_order(self):
        built = Vocabulary.build(["b a", "a c", "a b"])
        assert built.tokens[4:] == ["a", "b", "c"]

    def test_max_size(self):
        built = Vocabulary.build(["b a", "a c", "a b"], max_size=6)
        assert built.tokens[4:] == ["a", "b"]
        assert built.id_of("c") == UNK_ID

    def test_save_load(self, vocab, tmp_path):
        path = tmp_path / "vocab.txt"
        vocab.save(path)
        loaded = Vocabulary.load(path)
        assert loaded.tokens == vocab.tokens
        assert loaded.content_hash() == vocab.content_hash()

    def test_load_rejects_duplicates(self, tmp_path):
        path = tmp_path / "vocab.txt"
        path.write_text("\n".join(list(SPECIAL_TOKENS) + ["x", "x"]) + "\n", encoding="utf-8")
        with pytest.raises(DataError, match="Duplicate"):
            Vocabulary.load(path)

    def test_must_start_with_specials(self):
        with pytest.raises(ValueError):
            Vocabulary(["fire", "[PAD]", "[UNK]", "[CLS]", "[SEP]"])


class TestTokenize:

    def test_words_and_punctuation(self, vocab):
        ids = tokenize(vocab, "Fire starts.")
        assert [vocab.token_of(i) for i in ids] == ["fire", "starts", "."]

    def test_case_and_whitespace(self, vocab):
        assert tokenize(vocab, "FIRE   starts.") == tokenize(vocab, "Fire starts.")

    def test_unknown_word(self, vocab):
        ids = tokenize(vocab, "zyxwv starts.")
        assert ids[0] == UNK_ID
        assert ids[1:] == tokenize(vocab, "starts.")

    def test_empty_text(self, vocab):
        with pytest.raises(TokenizationError):
            tokenize(vocab, "   ")
        with pytest.raises(TokenizationError):
            EventText("")


class TestConcatenate:

    def test_separator_inserted(self, vocab):
        fire = tokenize(vocab, "fire starts")
        wind = tokenize(vocab, "wind blows")
        assert concatenate(fire, wind) == fire + [SEP_ID] + wind

    def test_length(self):
        assert len(concatenate([7], [8])) == 3

    def test_empty_operand(self):
        with pytest.raises(TokenizationError):
            concatenate([], [5])


class TestPackPair:

    def test_layout(self):
        seq = pack_pair([10, 11], [12])
        assert seq.ids == [CLS_ID, 10, 11, SEP_ID, 12, SEP_ID]
        assert seq.type_ids == [0, 0, 0, 0, 1, 1]
        assert seq.attention_mask == [1] * 6
        assert seq.cause_length == 4
        assert seq.effect_length == 2

    def test_padding(self):
        seq = pack_pair([10], [12], pad_to=8)
        assert seq.ids[-3:] == [PAD_ID] * 3
        assert seq.attention_mask == [1] * 5 + [0] * 3

    def test_truncates_longer_segment(self):
        seq = pack_pair(list(range(10, 20)), [30, 31], max_length=8)
        assert len(seq.ids) == 8
        assert seq.effect_length == 3

    def test_truncation_to_empty(self):
        with pytest.raises(TokenizationError):
            pack_pair([10], [11], max_length=4)

    def test_sequence_invariants(self):
        with pytest.raises(ValueError, match="CLS"):
            TokenSequence(ids=[10, SEP_ID], type_ids=[0, 0])
