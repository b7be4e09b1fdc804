import math
import random

import pytest

from fitclams.corpus import (
    CorpusError,
    compute_stats,
    load_corpus,
    read_frequencies_tsv,
    word_frequencies,
    write_frequencies_tsv,
)

from conftest import make_corpus


def brute_stats(lines, exclude_punct):
    """Independent enumeration oracle for TTR / length / interrogatives."""
    import unicodedata

    def is_punct(tok):
        return all(unicodedata.category(ch).startswith("P") for ch in tok)

    sents = [line.split() for line in lines]
    interrog = sum(1 for line in lines if line.rstrip().endswith("?"))
    if exclude_punct:
        sents = [[t for t in s if not is_punct(t)] for s in sents]
    tokens = sum(len(s) for s in sents)
    ttr = {}
    for n in (1, 2, 3):
        grams = [tuple(s[i:i + n]) for s in sents for i in range(len(s) - n + 1)]
        ttr[n] = len(set(grams)) / len(grams) if grams else None
    return {
        "token_count": tokens,
        "avg_sentence_length": tokens / len(sents),
        "ttr": ttr,
        "interrogative_fraction": interrog / len(lines),
    }


def test_load_basic(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("The cat runs .\n", encoding="utf-8")
    c = load_corpus(p)
    assert len(c) == 1
    assert c.sentences[0].tokens == ("the", "cat", "runs", ".")


def test_load_interrogative_and_blank_lines(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("Is it ?\n\nok .\n", encoding="utf-8")
    c = load_corpus(p)
    assert len(c) == 2
    assert c.sentences[0].is_interrogative
    assert not c.sentences[1].is_interrogative


def test_load_preserves_duplicates_and_order(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b\na b\na b\n", encoding="utf-8")
    c = load_corpus(p)
    assert len(c) == 3
    assert all(s.tokens == ("a", "b") for s in c.sentences)


def test_load_case_preserve(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("The Cat\n", encoding="utf-8")
    assert load_corpus(p, case="preserve").sentences[0].tokens == ("The", "Cat")


def test_load_invalid_utf8_reports_line(tmp_path):
    p = tmp_path / "c.txt"
    p.write_bytes(b"ok line\n\xff\xfe broken\n")
    with pytest.raises(CorpusError, match=":2:"):
        load_corpus(p)


def test_load_missing_file(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "nope.txt")


def test_ttr_hand_example():
    # one sentence [a, b, a, b]: 2/4 unigrams, 2/3 bigrams, 2/2 trigrams
    c = make_corpus(["a b a b"])
    st = compute_stats(c, "include")
    assert st.ttr[1] == pytest.approx(0.5)
    assert st.ttr[2] == pytest.approx(2 / 3)
    assert st.ttr[3] == pytest.approx(1.0)


def test_degenerate_single_token():
    st = compute_stats(make_corpus(["x"]), "include")
    assert st.ttr[1] == 1.0
    assert st.ttr[2] is None and st.ttr[3] is None


# Frozen oracles for the three committed stats fixtures, from hand
# enumeration of their n-grams.
STATS_EXPECTED = {
    "stats_a.txt": {
        "include": (9, 3.0, 5 / 9, 4 / 6, 3 / 3, 1 / 3),
        "exclude": (7, 7 / 3, 3 / 7, 2 / 4, 2 / 2, 1 / 3),
    },
    "stats_b.txt": {
        "include": (8, 8 / 3, 4 / 8, 3 / 5, 1 / 2, 1.0),
        "exclude": (5, 5 / 3, 3 / 5, 1 / 2, None, 1.0),
    },
    "stats_c.txt": {
        "include": (3, 1.0, 2 / 3, None, None, 0.0),
        "exclude": (3, 1.0, 2 / 3, None, None, 0.0),
    },
}


@pytest.mark.parametrize("name", sorted(STATS_EXPECTED))
@pytest.mark.parametrize("policy", ["include", "exclude"])
def test_stats_fixture_oracles(fixtures_dir, name, policy):
    c = load_corpus(fixtures_dir / "stats" / name)
    st = compute_stats(c, policy)
    tokens, avg, t1, t2, t3, q = STATS_EXPECTED[name][policy]
    assert st.token_count == tokens
    assert st.avg_sentence_length == pytest.approx(avg)
    for n, expected in ((1, t1), (2, t2), (3, t3)):
        if expected is None:
            assert st.ttr[n] is None
        else:
            assert st.ttr[n] == pytest.approx(expected)
    assert st.interrogative_fraction == pytest.approx(q)
    # and the independent enumerator agrees
    lines = (fixtures_dir / "stats" / name).read_text().splitlines()
    brute = brute_stats(lines, policy == "exclude")
    assert st.token_count == brute["token_count"]
    for n in (1, 2, 3):
        if brute["ttr"][n] is None:
            assert st.ttr[n] is None
        else:
            assert st.ttr[n] == pytest.approx(brute["ttr"][n])


def test_duplicating_sentences_halves_ttr():
    rng = random.Random(7)
    vocab = list("abcdefg")
    for _ in range(3):
        lines = [" ".join(rng.choices(vocab, k=rng.randint(2, 6)))
                 for _ in range(rng.randint(4, 8))]
        st1 = compute_stats(make_corpus(lines), "include")
        st2 = compute_stats(make_corpus(lines * 2), "include")
        for n in (1, 2, 3):
            if st1.ttr[n] is not None:
                assert st2.ttr[n] == pytest.approx(st1.ttr[n] / 2)


def test_all_questions_fraction_is_one():
    c = make_corpus(["is it ?", "what ?", "who is here ?"])
    assert compute_stats(c, "include").interrogative_fraction == 1.0


def test_permutation_invariance():
    lines = ["a b c", "c b", "a a a", "d e f g"]
    st1 = compute_stats(make_corpus(lines), "include")
    st2 = compute_stats(make_corpus(list(reversed(lines))), "include")
    assert st1.token_count == st2.token_count
    assert st1.ttr == st2.ttr


def test_frequencies_sum_to_token_count():
    lines = ["the cat runs .", "is it ?", "the the the"]
    c = make_corpus(lines)
    freqs = word_frequencies(c)
    assert sum(freqs.values()) == compute_stats(c, "include").token_count


def test_frequencies_counts_and_order():
    freqs = word_frequencies(make_corpus(["the cat the"]))
    assert freqs == {"cat": 1, "the": 2}
    assert list(freqs) == ["cat", "the"]


def test_frequencies_tsv_roundtrip(tmp_path):
    freqs = {"b": 2, "a": 10, "é": 1}
    path = tmp_path / "f.tsv"
    write_frequencies_tsv(freqs, path)
    assert read_frequencies_tsv(path) == freqs
    assert path.read_text(encoding="utf-8").splitlines()[0] == "a\t10"


def test_empty_corpus_errors():
    with pytest.raises(CorpusError):
        compute_stats(make_corpus([]), "include")


def test_all_punctuation_corpus_errors():
    with pytest.raises(CorpusError):
        compute_stats(make_corpus([". . .", "? !"]), "exclude")
