import pytest
from hypothesis import given
from hypothesis import strategies as st

from morphpiece.errors import DuplicateTokenError, ParseError, UnknownTokenError
from morphpiece.vocab import (
    DEFAULT_SPECIALS,
    END_OF_TEXT,
    NO_SPACE_JOINER,
    MergedVocabulary,
    SourceTag,
    deserialize,
    merge_vocabularies,
    serialize,
)


def small_vocab():
    return merge_vocabularies(
        {"bat", "#ing", "dis#", "#"},
        ["a", "b", "bat", "ab"],
    )


class TestMergeLayout:
    def test_specials_come_first_in_given_order(self):
        vocab = small_vocab()
        assert vocab.id_to_token[:2] == (END_OF_TEXT, NO_SPACE_JOINER)
        assert vocab.tag_of(END_OF_TEXT) is SourceTag.SPECIAL
        assert vocab.tag_of(NO_SPACE_JOINER) is SourceTag.SPECIAL

    def test_morph_block_sorted_then_bpe_in_id_order(self):
        vocab = small_vocab()
        assert vocab.id_to_token == (
            END_OF_TEXT,
            NO_SPACE_JOINER,
            "#",
            "#ing",
            "bat",
            "dis#",
            "a",
            "b",
            "ab",
        )

    def test_source_tags(self):
        vocab = small_vocab()
        assert vocab.tag_of("dis#") is SourceTag.MORPH_AFFIX
        assert vocab.tag_of("#ing") is SourceTag.MORPH_AFFIX
        assert vocab.tag_of("#") is SourceTag.MORPH_AFFIX
        assert vocab.tag_of("bat") is SourceTag.SHARED
        assert vocab.tag_of("a") is SourceTag.BPE

    def test_shared_token_consumes_one_id(self):
        vocab = small_vocab()
        assert len(vocab) == 4 + 4 - 1 + 2
        assert vocab.id_to_token.count("bat") == 1

    def test_no_specials(self):
        vocab = merge_vocabularies({"bat"}, ["a"], specials=())
        assert len(vocab) == 2
        assert vocab.specials == ()

    def test_special_colliding_with_source_rejected(self):
        with pytest.raises(DuplicateTokenError):
            merge_vocabularies({END_OF_TEXT, "bat"}, ["a"])
        with pytest.raises(DuplicateTokenError):
            merge_vocabularies({"bat"}, [END_OF_TEXT])

    def test_duplicate_bpe_token_rejected(self):
        with pytest.raises(DuplicateTokenError):
            merge_vocabularies({"bat"}, ["a", "a"])

    def test_duplicate_special_rejected(self):
        with pytest.raises(DuplicateTokenError):
            merge_vocabularies({"bat"}, ["a"], specials=(END_OF_TEXT, END_OF_TEXT))


class TestLookups:
    def test_round_trip_ids(self):
        vocab = small_vocab()
        for idx, token in enumerate(vocab.id_to_token):
            assert vocab.id_of(token) == idx
            assert vocab.token_of(idx) == token

    def test_unknown_token_and_id(self):
        vocab = small_vocab()
        with pytest.raises(UnknownTokenError):
            vocab.id_of("zz")
        with pytest.raises(UnknownTokenError):
            vocab.token_of(len(vocab))
        with pytest.raises(UnknownTokenError):
            vocab.token_of(-1)

    def test_contains(self):
        vocab = small_vocab()
        assert "bat" in vocab
        assert "zz" not in vocab

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            MergedVocabulary(["a"], [], ())

    def test_constructor_duplicate_rejected(self):
        with pytest.raises(DuplicateTokenError):
            MergedVocabulary(["a", "a"], [SourceTag.BPE, SourceTag.BPE], ())


@given(
    morph=st.sets(st.sampled_from(["bat", "#ing", "dis#", "x", "y", "#", "foot"])),
    bpe=st.lists(
        st.sampled_from(["a", "b", "bat", "x", "Ġ", "th", "foot"]),
        unique=True,
    ),
    n_specials=st.integers(0, 2),
)
def test_size_identity(morph, bpe, n_specials):
    specials = DEFAULT_SPECIALS[:n_specials]
    vocab = merge_vocabularies(morph, bpe, specials)
    overlap = len(morph & set(bpe))
    assert len(vocab) == len(morph) + len(bpe) - overlap + len(specials)
    # ids dense, one tag per token
    assert len(vocab.id_to_token) == len(vocab.tags)
    assert len(set(vocab.id_to_token)) == len(vocab)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        vocab = small_vocab()
        path = str(tmp_path / "vocab.tsv")
        serialize(vocab, path)
        loaded = deserialize(path)
        assert loaded.id_to_token == vocab.id_to_token
        assert loaded.tags == vocab.tags
        assert loaded.specials == vocab.specials

    def test_file_shape(self, tmp_path):
        path = str(tmp_path / "vocab.tsv")
        serialize(small_vocab(), path)
        lines = open(path, encoding="utf-8").read().splitlines()
        assert lines[0] == f"{END_OF_TEXT}\t0\tspecial"
        assert all(len(l.split("\t")) == 3 for l in lines)

    @pytest.mark.parametrize(
        "content,line_no",
        [
            ("a\t0\tbpe\nb\tzero\tbpe\n", 2),
            ("a\t0\tbpe\nb\t1\n", 2),
            ("a\t0\tbpe\nb\t1\tmystery\n", 2),
            ("a\t0\tbpe\na\t1\tbpe\n", 2),
            ("\t0\tbpe\n", 1),
        ],
    )
    def test_corrupt_rows_report_line(self, tmp_path, content, line_no):
        path = tmp_path / "vocab.tsv"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ParseError) as err:
            deserialize(str(path))
        assert err.value.line_no == line_no

    def test_sparse_ids_rejected(self, tmp_path):
        path = tmp_path / "vocab.tsv"
        path.write_text("a\t0\tbpe\nb\t2\tbpe\n", encoding="utf-8")
        with pytest.raises(ParseError):
            deserialize(str(path))

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "vocab.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ParseError):
            deserialize(str(path))

    def test_specials_recovered_from_tags(self, tmp_path):
        path = tmp_path / "vocab.tsv"
        path.write_text(
            f"{END_OF_TEXT}\t0\tspecial\nbat\t1\tmorph-stem\n", encoding="utf-8"
        )
        vocab = deserialize(str(path))
        assert vocab.specials == (END_OF_TEXT,)
