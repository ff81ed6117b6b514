import pytest

from morphpiece.morphtable import build_reverse
from morphpiece.selftest import build_artifacts, roundtrippable_surfaces
from morphpiece.tokenizer import MorphPieceTokenizer


@pytest.fixture(scope="session")
def artifact_dir(tmp_path_factory) -> str:
    """Artifacts built once from the bundled sample data."""
    out = tmp_path_factory.mktemp("artifacts")
    build_artifacts(str(out))
    return str(out)


@pytest.fixture(scope="session")
def tokenizer(artifact_dir) -> MorphPieceTokenizer:
    return MorphPieceTokenizer.from_dir(artifact_dir)


@pytest.fixture(scope="session")
def reverse(tokenizer):
    return build_reverse(tokenizer.table)


@pytest.fixture(scope="session")
def morph_words(tokenizer, reverse) -> list[str]:
    words = roundtrippable_surfaces(tokenizer, reverse)
    assert words, "no usable table words in bundled data"
    return words
