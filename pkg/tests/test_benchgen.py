import json
from collections import Counter
from itertools import combinations
from pathlib import Path

import pytest

from fitclams.benchgen import (
    AuxLex,
    BenchgenError,
    ObjectNoun,
    PARADIGMS,
    Preposition,
    emit_benchmark,
    generate,
    load_aux,
    read_benchmark,
    save_aux,
    validate_pair,
)
from fitclams.lexicon import LexEntry, Lexicon, load_lexicon

DATA = Path(__file__).resolve().parents[1] / "src" / "fitclams" / "data"


def tiny_lexicon():
    def noun(lemma, pl):
        return LexEntry(lemma=lemma, form_sg=lemma, form_pl=pl, pos="noun",
                        freq={"c": {"sg": 5}}, bin=0, source_corpus="c",
                        animate=True)

    def verb(lemma, sg, pl):
        return LexEntry(lemma=lemma, form_sg=sg, form_pl=pl, pos="verb",
                        freq={"c": {"sg": 3}}, bin=0, source_corpus="c")

    return Lexicon(
        language="en", sources=("c",),
        nouns=(noun("cat", "cats"), noun("dog", "dogs"), noun("bird", "birds")),
        verbs=(verb("run", "runs", "run"), verb("sit", "sits", "sit")),
    )


def tiny_aux():
    ctx = {"sg": ("the", "friend"), "pl": ("the", "friends")}
    return AuxLex(
        language="en",
        determiners={"sg": {"default": "the"}, "pl": {"default": "the"}},
        prepositions=(Preposition(tokens=("near",)),),
        object_nouns=(ObjectNoun(
            entry=LexEntry(lemma="friend", form_sg="friend",
                           form_pl="friends", pos="noun",
                           freq={"c": {"sg": 9}}, bin=0, source_corpus="c",
                           animate=True),
            contexts={"subj": ctx, "obj": ctx, "pobj": ctx},
        ),),
        rel_verbs=(("likes", "like"),),
        rel_pronouns={"nom": {"default": "that"}, "acc": {"default": "that"}},
        long_vp_fillers={"run": ("to", "the", "park"),
                         "sit": ("on", "the", "bed")},
        coordinator="and",
    )


def test_count_formulas_tiny():
    # N=3 nouns, V=2 verbs, P=1 prep, O=2 object forms, R=1 rel verb
    pairs = generate(tiny_lexicon(), tiny_aux())
    counts = Counter(p.paradigm for p in pairs)
    n, v, p, o, r = 3, 2, 1, 2, 1
    assert counts["simple_agreement"] == n * v * 2
    assert counts["agreement_prep_phrase"] == n * v * p * o * 2
    assert counts["agreement_subj_rel_clause"] == n * v * r * o * 2
    assert counts["agreement_obj_rel_clause_across"] == n * v * r * o * 2
    assert counts["agreement_obj_rel_clause_within"] == n * v * r * o * 2
    n_choose_2 = len(list(combinations(range(v), 2)))
    assert counts["agreement_vp_coord"] == n_choose_2 * n * 2
    assert counts["agreement_long_vp_coord"] == n_choose_2 * n * 2


def test_pair_difference_invariant_tiny():
    for pair in generate(tiny_lexicon(), tiny_aux()):
        validate_pair(pair)


def test_expected_surface_forms():
    pairs = generate(tiny_lexicon(), tiny_aux(),
                     paradigms=("simple_agreement",))
    texts = {(" ".join(p.grammatical), " ".join(p.ungrammatical))
             for p in pairs}
    assert ("the cat runs", "the cats runs") in texts
    assert ("the cats run", "the cat run") in texts


def test_vp_coord_unordered_pairs_once():
    pairs = generate(tiny_lexicon(), tiny_aux(),
                     paradigms=("agreement_vp_coord",))
    verb_pairs = {(p.metadata["coord_verb"], p.metadata["verb_lemma"])
                  for p in pairs}
    assert verb_pairs == {("run", "sit")}


def test_no_out_of_lexicon_leakage():
    lex, aux = tiny_lexicon(), tiny_aux()
    allowed = {"the", "near", "that", "and"}
    for e in lex.nouns + lex.verbs:
        allowed |= {e.form_sg, e.form_pl}
    for o in aux.object_nouns:
        for by_num in o.contexts.values():
            for toks in by_num.values():
                allowed |= set(toks)
    allowed |= {f for pair in aux.rel_verbs for f in pair}
    allowed |= {t for f in aux.long_vp_fillers.values() for t in f}
    for pair in generate(lex, aux):
        assert set(pair.grammatical) <= allowed
        assert set(pair.ungrammatical) <= allowed


def test_missing_objects_errors():
    aux = tiny_aux()
    bare = AuxLex(language="en", determiners=aux.determiners,
                  prepositions=aux.prepositions, object_nouns=(),
                  rel_verbs=aux.rel_verbs, rel_pronouns=aux.rel_pronouns,
                  long_vp_fillers=aux.long_vp_fillers)
    with pytest.raises(BenchgenError, match="object nouns"):
        generate(tiny_lexicon(), bare, paradigms=("agreement_prep_phrase",))


def test_missing_filler_errors():
    aux = tiny_aux()
    no_fillers = AuxLex(language="en", determiners=aux.determiners,
                        prepositions=aux.prepositions,
                        object_nouns=aux.object_nouns,
                        rel_verbs=aux.rel_verbs,
                        rel_pronouns=aux.rel_pronouns, long_vp_fillers={})
    with pytest.raises(BenchgenError, match="filler"):
        generate(tiny_lexicon(), no_fillers,
                 paradigms=("agreement_long_vp_coord",))


def test_unknown_paradigm_errors():
    with pytest.raises(BenchgenError, match="unknown paradigms"):
        generate(tiny_lexicon(), tiny_aux(), paradigms=("nope",))


def test_emit_deterministic_and_readable(tmp_path):
    pairs = generate(tiny_lexicon(), tiny_aux())
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    emit_benchmark(pairs, a, manifest={"stage": "test"})
    emit_benchmark(list(reversed(pairs)), b, manifest={"stage": "test"})
    assert a.read_bytes() == b.read_bytes()

    loaded = read_benchmark(a)
    assert len(loaded) == len(pairs)
    assert [p.pair_id for p in loaded] == sorted(
        [p.pair_id for p in pairs],
        key=lambda i: next((q.paradigm, q.pair_id) for q in pairs if q.pair_id == i))

    sidecar = json.loads((tmp_path / "a.jsonl.manifest.json").read_text())
    assert sidecar["pair_counts"]["simple_agreement"] == 12


def test_pair_ids_stable_across_runs():
    p1 = generate(tiny_lexicon(), tiny_aux())
    p2 = generate(tiny_lexicon(), tiny_aux())
    assert [p.pair_id for p in p1] == [p.pair_id for p in p2]


def test_metadata_fields():
    (pair,) = [p for p in generate(tiny_lexicon(), tiny_aux(),
                                   paradigms=("agreement_prep_phrase",))
               if p.metadata["subject_lemma"] == "cat"
               and p.metadata["verb_lemma"] == "run"
               and p.metadata["object_number"] == "pl"
               and p.metadata["gram_number"] == "sg"
               and p.metadata["preposition"] == "near"]
    assert pair.metadata["subject_gram_form"] == "cat"
    assert pair.metadata["subject_ungram_form"] == "cats"
    assert pair.metadata["verb_form"] == "runs"
    assert pair.grammatical == ("the", "cat", "near", "the", "friends", "runs")


# -- shipped lexicons --------------------------------------------------------

EXPECTED_COUNTS = {
    "en": {"agreement_long_vp_coord": 900,
           "agreement_obj_rel_clause_across": 3200,
           "agreement_obj_rel_clause_within": 3200,
           "agreement_prep_phrase": 4800,
           "simple_agreement": 200,
           "agreement_subj_rel_clause": 3200,
           "agreement_vp_coord": 900},
    "fr": {"agreement_long_vp_coord": 378,
           "agreement_obj_rel_clause_across": 504,
           "agreement_obj_rel_clause_within": 504,
           "agreement_prep_phrase": 2520,
           "simple_agreement": 126,
           "agreement_subj_rel_clause": 504,
           "agreement_vp_coord": 378},
    "de": {"agreement_long_vp_coord": 900,
           "agreement_obj_rel_clause_across": 1600,
           "agreement_obj_rel_clause_within": 1600,
           "agreement_prep_phrase": 4000,
           "simple_agreement": 200,
           "agreement_subj_rel_clause": 1600,
           "agreement_vp_coord": 900},
}

TOTALS = {"en": 16400, "fr": 4914, "de": 10800}


@pytest.mark.parametrize("lang", ["en", "fr", "de"])
def test_shipped_lexicon_counts(lang):
    lex = load_lexicon(DATA / lang / "lexicon.json")
    aux = load_aux(DATA / lang / "aux.json")
    for source in lex.sources:
        pairs = generate(lex, aux, sources=[source])
        counts = Counter(p.paradigm for p in pairs)
        assert dict(counts) == EXPECTED_COUNTS[lang]
        assert sum(counts.values()) == TOTALS[lang]


def test_shipped_aux_roundtrip(tmp_path):
    aux = load_aux(DATA / "de" / "aux.json")
    save_aux(aux, tmp_path / "aux.json")
    assert load_aux(tmp_path / "aux.json") == aux


def test_german_surface_shape():
    lex = load_lexicon(DATA / "de" / "lexicon.json")
    aux = load_aux(DATA / "de" / "aux.json")
    pairs = generate(lex, aux, paradigms=("agreement_subj_rel_clause",),
                     sources=["childes-de"])
    sample = next(p for p in pairs
                  if p.metadata["subject_lemma"] == "feind"
                  and p.metadata["object_lemma"] == "mitglied"
                  and p.metadata["rel_verb"] == "mag"
                  and p.metadata["object_number"] == "sg"
                  and p.metadata["gram_number"] == "sg"
                  and p.metadata["verb_lemma"] == "kommen")
    assert " ".join(sample.grammatical) == \
        "der feind , der das mitglied mag , kommt"
    assert " ".join(sample.ungrammatical) == \
        "die feinde , die das mitglied mögen , kommt"
