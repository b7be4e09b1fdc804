import json

import pytest

from fitclams._kernels import bpe as kernel, bpe_py
from fitclams.bpe import (
    Encoder,
    TokenizerError,
    decode,
    load_model,
    save_model,
    train_bpe,
)

from conftest import make_corpus


def test_single_candidate_pair():
    # "aa aa aa": the only contentful merge is (a, a)
    model = train_bpe(make_corpus(["aa aa aa"]), vocab_size=3)
    assert model.merges[0] == ("a", "a")


def test_count_beats_order():
    # pairs: (a,b) appears twice, (b,a) once
    model = train_bpe(make_corpus(["ab ab ba"]), vocab_size=4)
    assert model.merges[0] == ("a", "b")


def test_vocab_size_too_small():
    with pytest.raises(TokenizerError, match="base alphabet"):
        train_bpe(make_corpus(["abc"]), vocab_size=3)


def test_roundtrip_fixture_corpus(scoring_corpus):
    model = train_bpe(scoring_corpus, vocab_size=120)
    encoder = Encoder(model)
    for sent in scoring_corpus.sentences:
        assert decode(model, encoder.encode(sent)) == sent.tokens


def test_retraining_is_deterministic(scoring_corpus, tmp_path):
    m1 = train_bpe(scoring_corpus, vocab_size=150)
    m2 = train_bpe(scoring_corpus, vocab_size=150)
    assert m1 == m2
    save_model(m1, tmp_path / "a.json")
    save_model(m2, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_monotone_coverage(scoring_corpus):
    sizes = [60, 90, 120, 180]
    sentence = scoring_corpus.sentences[0]
    lengths = []
    for size in sizes:
        enc = Encoder(train_bpe(scoring_corpus, vocab_size=size))
        lengths.append(len(enc.encode(sentence)))
    assert lengths == sorted(lengths, reverse=True)


def test_word_spans_and_bow_flags(scoring_corpus):
    model = train_bpe(scoring_corpus, vocab_size=80)
    enc = Encoder(model)
    for sent in scoring_corpus.sentences[:10]:
        tok = enc.encode(sent)
        assert len(tok.word_spans) == len(sent.tokens)
        pos = 0
        for start, end in tok.word_spans:
            assert start == pos and end > start
            assert tok.is_bow[start]
            assert not any(tok.is_bow[i] for i in range(start + 1, end))
            pos = end
        assert pos == len(tok.subword_ids)
        # one BOW-marked subword per word
        assert sum(tok.is_bow) == len(sent.tokens)


def test_single_character_word():
    model = train_bpe(make_corpus(["a b a"]), vocab_size=10)
    tok = Encoder(model).encode(("a",))
    assert tok.word_spans == ((0, 1),)
    assert tok.is_bow == (True,)


def test_three_subword_split():
    # only (x, y) can merge, so "xyz" encodes as marker + "xy" + "z"
    model = train_bpe(make_corpus(["xy xy z"]), vocab_size=5)
    assert model.merges == (("x", "y"),)
    tok = Encoder(model).encode(("xyz",))
    spans = tok.word_spans
    assert spans == ((0, 3),)
    assert [model.vocab[i] for i in tok.subword_ids] == ["▁", "xy", "z"]


def test_unknown_character_errors(scoring_corpus):
    model = train_bpe(scoring_corpus, vocab_size=80)
    with pytest.raises(TokenizerError, match="not representable"):
        Encoder(model).encode(("ßß",))


def test_marker_collision_rejected():
    with pytest.raises(TokenizerError, match="marker"):
        train_bpe(make_corpus(["a▁b"]), vocab_size=10)


def test_model_file_roundtrip(scoring_corpus, tmp_path):
    model = train_bpe(scoring_corpus, vocab_size=100)
    save_model(model, tmp_path / "tok.json")
    loaded = load_model(tmp_path / "tok.json")
    assert loaded == model
    payload = json.loads((tmp_path / "tok.json").read_text())
    assert set(payload) >= {"vocab", "merges", "bow_marker", "vocab_size"}


def test_kernels_agree(scoring_corpus):
    """The compiled kernel and the pure-Python reference must produce the
    same merge list; when only one is available this degenerates to a
    self-check."""
    word_counts = {}
    for sent in scoring_corpus.sentences:
        for token in sent.tokens:
            word_counts[token] = word_counts.get(token, 0) + 1
    alphabet = sorted({"▁"} | {ch for w in word_counts for ch in w})
    sym_id = {s: i for i, s in enumerate(alphabet)}
    types = sorted(word_counts)

    def run(impl):
        symbols = list(alphabet)
        words = [[sym_id["▁"]] + [sym_id[ch] for ch in w] for w in types]
        counts = [word_counts[w] for w in types]
        return impl.train_merges(words, counts, symbols, 120), symbols

    merges_a, syms_a = run(kernel)
    merges_b, syms_b = run(bpe_py)
    assert merges_a == merges_b
    assert syms_a == syms_b
