import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def make_corpus(lines, cid="test"):
    from fitclams.corpus import Corpus, Sentence

    sentences = tuple(
        Sentence(tokens=tuple(line.split()),
                 is_interrogative=line.rstrip().endswith("?"))
        for line in lines
    )
    return Corpus(id=cid, sentences=sentences)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def scoring_corpus():
    from fitclams.corpus import load_corpus

    return load_corpus(FIXTURES / "scoring_corpus.txt", corpus_id="scoring-fix")


@pytest.fixture(scope="session")
def scoring_model(scoring_corpus):
    """BPE + trigram model over the 50-sentence fixture corpus."""
    from fitclams.bpe import train_bpe
    from fitclams.ngram import train_ngram

    bpe_model = train_bpe(scoring_corpus, vocab_size=120)
    return train_ngram(scoring_corpus, bpe_model, order=3)
