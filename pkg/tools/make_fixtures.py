#!/usr/bin/env python3
"""Regenerate the committed test fixtures under tests/fixtures/pipeline/.

Two 2,000-sentence corpora (a child-register one and an encyclopedic one)
with guaranteed coverage of the fixture lexicon in both, plus the
annotation stream, allowlist, picks, aux lexicon, and pipeline config
that drive the end-to-end test. Deterministic: fixed seed, stable order.
"""

from __future__ import annotations

import json
import random
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
SEED = 20250810
N_SENTENCES = 2000

CHILD_ID, WIKI_ID = "child-fix", "wiki-fix"

SUBJ_NOUNS = [
    ("cat", "cats"), ("dog", "dogs"), ("bird", "birds"),
    ("farmer", "farmers"), ("doctor", "doctors"), ("teacher", "teachers"),
]
OBJ_NOUNS = {
    CHILD_ID: [("friend", "friends"), ("guard", "guards")],
    WIKI_ID: [("neighbor", "neighbors"), ("worker", "workers")],
}
VERBS = [
    ("run", "runs", "run"), ("jump", "jumps", "jump"),
    ("sing", "sings", "sing"), ("play", "plays", "play"),
    ("wait", "waits", "wait"), ("work", "works", "work"),
]
REL_VERBS = [("likes", "like"), ("loves", "love")]
PREPS = [["next", "to"], ["behind"], ["near"]]
FILLERS = {
    "run": "to the park",
    "jump": "on the ball",
    "sing": "a little song",
    "play": "with the toy",
    "wait": "near the house",
    "work": "in the garden",
}

# Forms that must be attested in both corpora for the pipeline to work.
REQUIRED_FORMS = sorted(
    {f for pair in SUBJ_NOUNS for f in pair}
    | {f for objs in OBJ_NOUNS.values() for pair in objs for f in pair}
    | {f for _, sg, pl in VERBS for f in (sg, pl)}
    | {f for pair in REL_VERBS for f in pair}
    | {w for p in PREPS for w in p}
    | {w for f in FILLERS.values() for w in f.split()}
    | {"the", "stone", "stones"}
)


def child_sentences(rng: random.Random) -> list[str]:
    objects = [f for pair in OBJ_NOUNS[CHILD_ID] for f in pair]
    things = ["ball", "toy", "car", "book", "cup", "song", "house", "park",
              "garden", "store"]
    people = ["mommy", "daddy", "baby"]
    adjs = ["big", "little", "red", "blue", "nice", "good"]

    def subj_and_verb():
        """Number-consistent subject/verb pair; agreement in the fixture
        corpora is always correct, as in real text."""
        sg, pl = rng.choice(SUBJ_NOUNS)
        _, vsg, vpl = rng.choice(VERBS)
        return (sg, vsg, "is") if rng.random() < 0.5 else (pl, vpl, "are")

    def noun():
        return rng.choice([sg for sg, _ in SUBJ_NOUNS] + objects + things)

    def simple():
        n, v, _ = subj_and_verb()
        return f"the {n} {v} ."

    def with_prep():
        n, v, _ = subj_and_verb()
        return (f"the {n} {v} {' '.join(rng.choice(PREPS))} "
                f"the {rng.choice(objects)} .")

    def copula():
        n, _, be = subj_and_verb()
        return f"the {n} {be} {rng.choice(adjs)} ."

    def rel():
        n, _, be = subj_and_verb()
        rsg, rpl = rng.choice(REL_VERBS)
        rv = rsg if be == "is" else rpl
        return f"the {n} {rv} the {rng.choice(objects)} ."

    def coord():
        sg, pl = rng.choice(SUBJ_NOUNS)
        (_, v1sg, v1pl), (_, v2sg, v2pl) = rng.sample(VERBS, 2)
        if rng.random() < 0.5:
            return f"the {sg} {v1sg} and {v2sg} ."
        return f"the {pl} {v1pl} and {v2pl} ."

    templates = [
        simple, simple, with_prep, copula, rel, coord,
        lambda: f"look at the {noun()} .",
        lambda: f"{rng.choice(people)} sees the {noun()} .",
        lambda: f"i want the {rng.choice(things)} .",
        lambda: f"they {rng.choice([p for _, p in REL_VERBS])} the {noun()} .",
        lambda: f"we go to the {rng.choice(things)} now .",
        # questions, roughly two in five lines
        lambda: f"where is the {noun()} ?",
        lambda: f"what is this ?",
        lambda: f"do you see the {noun()} ?",
        lambda: f"is the {noun()} {rng.choice(adjs)} ?",
        lambda: f"who {rng.choice([s for s, _ in REL_VERBS])} the {noun()} ?",
        lambda: f"can you find the {rng.choice(things)} ?",
    ]
    return [rng.choice(templates)() for _ in range(N_SENTENCES - len(_child_seed_lines()))]


def _child_seed_lines() -> list[str]:
    """Deterministic coverage block: every required form in child register."""
    lines = []
    for sg, pl in SUBJ_NOUNS + OBJ_NOUNS[CHILD_ID] + OBJ_NOUNS[WIKI_ID]:
        lines.append(f"the {sg} is here .")
        lines.append(f"the {pl} are here .")
    for lemma, vsg, vpl in VERBS:
        lines.append(f"the cat {vsg} {FILLERS[lemma]} .")
        lines.append(f"the dogs {vpl} {FILLERS[lemma]} .")
    for rsg, rpl in REL_VERBS:
        lines.append(f"the baby {rsg} the ball .")
        lines.append(f"they {rpl} the park .")
    for prep in PREPS:
        lines.append(f"the cat waits {' '.join(prep)} the house .")
    lines.append("the stone is big .")
    lines.append("the stones are little .")
    lines.append("the kitten sleeps now .")
    lines.append("the kittens sleep now .")
    return lines


def wiki_sentences(rng: random.Random) -> list[str]:
    places = ["village", "river", "museum", "region", "school", "farm",
              "market", "tower", "castle", "forest", "garden", "park",
              "house", "store"]
    cats = ["building", "settlement", "landmark", "tradition", "collection"]
    adjs = ["local", "famous", "historic", "small", "large", "ancient",
            "modern", "notable"]
    years = ["1890", "1901", "1925", "1887", "1960"]
    plurals = [pl for _, pl in SUBJ_NOUNS]
    objects = [f for pair in OBJ_NOUNS[WIKI_ID] for f in pair]

    def agreeing():
        sg, pl = rng.choice(SUBJ_NOUNS)
        _, vsg, vpl = rng.choice(VERBS)
        return (sg, vsg) if rng.random() < 0.5 else (pl, vpl)

    def clause():
        n, v = agreeing()
        return (f"the {n} {v} {' '.join(rng.choice(PREPS))} "
                f"the {rng.choice(objects)}")

    def coord():
        sg, pl = rng.choice(SUBJ_NOUNS)
        (_, v1sg, v1pl), (_, v2sg, v2pl) = rng.sample(VERBS, 2)
        n, v1, v2 = (sg, v1sg, v2sg) if rng.random() < 0.5 else (pl, v1pl, v2pl)
        return (f"the {n} of the {rng.choice(places)} {v1} and {v2} "
                f"every {rng.choice(['winter', 'summer'])} .")

    templates = [
        coord,
        lambda: f"the {rng.choice(places)} is a {rng.choice(adjs)} "
                f"{rng.choice(cats)} in the {rng.choice(places)} and remains "
                f"a {rng.choice(adjs)} {rng.choice(cats)} of the region .",
        lambda: f"the {rng.choice(places)} was established in "
                f"{rng.choice(years)} by local {rng.choice(plurals)} and "
                f"{rng.choice(objects)} from the {rng.choice(places)} .",
        lambda: f"many {rng.choice(plurals)} "
                f"{rng.choice([v for _, _, v in VERBS])} "
                f"{' '.join(rng.choice(PREPS))} the {rng.choice(places)} "
                f"during the {rng.choice(['winter', 'summer', 'festival'])} .",
        lambda: f"{clause()} in the {rng.choice(places)} of the old town .",
        lambda: f"records from {rng.choice(years)} show that the "
                f"{rng.choice(places)} was a {rng.choice(adjs)} "
                f"{rng.choice(cats)} known across the region .",
        lambda: f"the {rng.choice(adjs)} {rng.choice(places)} houses a "
                f"{rng.choice(cats)} of {rng.choice(adjs)} works from the "
                f"{rng.choice(['early', 'late'])} century .",
    ]
    return [rng.choice(templates)() for _ in range(N_SENTENCES - len(_wiki_seed_lines()))]


def _wiki_seed_lines() -> list[str]:
    lines = []
    for sg, pl in SUBJ_NOUNS + OBJ_NOUNS[CHILD_ID] + OBJ_NOUNS[WIKI_ID]:
        lines.append(f"the {sg} of the village is mentioned in old records .")
        lines.append(f"several {pl} are mentioned in the records .")
    for lemma, vsg, vpl in VERBS:
        lines.append(f"the farmer {vsg} {FILLERS[lemma]} near the river .")
        lines.append(f"local workers {vpl} {FILLERS[lemma]} every summer .")
    for rsg, rpl in REL_VERBS:
        lines.append(f"the guide {rsg} the ancient tower .")
        lines.append(f"visitors {rpl} the old market .")
    for prep in PREPS:
        lines.append(f"the school stands {' '.join(prep)} the castle walls .")
    lines.append("a stone from the tower is displayed in the museum .")
    lines.append("the stones of the wall are ancient .")
    return lines


def write_corpora() -> tuple[list[str], list[str]]:
    rng = random.Random(SEED)
    child = _child_seed_lines() + child_sentences(rng)
    wiki = _wiki_seed_lines() + wiki_sentences(rng)
    assert len(child) == N_SENTENCES and len(wiki) == N_SENTENCES

    for name, lines in (("child.txt", child), ("wiki.txt", wiki)):
        (FIXTURE_DIR / "pipeline" / name).write_text(
            "\n".join(lines) + "\n", encoding="utf-8")

    for label, lines in (("child", child), ("wiki", wiki)):
        vocab = {t for line in lines for t in line.split()}
        missing = [f for f in REQUIRED_FORMS if f not in vocab]
        assert not missing, f"{label} corpus is missing {missing}"
    return child, wiki


def write_annotations() -> None:
    rows = []
    for sg, pl in SUBJ_NOUNS + OBJ_NOUNS[CHILD_ID] + OBJ_NOUNS[WIKI_ID]:
        rows.append(f"{sg}\t{sg}\tNOUN\tNumber=Sing")
        rows.append(f"{pl}\t{sg}\tNOUN\tNumber=Plur")
    # alternate VBP-style and infinitive-style evidence for plural verbs
    for i, (lemma, vsg, vpl) in enumerate(VERBS):
        rows.append(f"{vsg}\t{lemma}\tVERB\t"
                    f"Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin")
        if i % 2 == 0:
            rows.append(f"{vpl}\t{lemma}\tVERB\tTense=Pres|VerbForm=Fin")
        else:
            rows.append(f"{vpl}\t{lemma}\tVERB\tVerbForm=Inf")
    # distractors: not allowlisted; subjunctive plural; plural unattested in
    # the wiki corpus
    rows.append("stone\tstone\tNOUN\tNumber=Sing")
    rows.append("stones\tstone\tNOUN\tNumber=Plur")
    rows.append("sleeps\tsleep\tVERB\t"
                "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin")
    rows.append("sleep\tsleep\tVERB\tMood=Sub|Tense=Pres|VerbForm=Fin")
    rows.append("kitten\tkitten\tNOUN\tNumber=Sing")
    rows.append("kittens\tkitten\tNOUN\tNumber=Plur")
    (FIXTURE_DIR / "pipeline" / "annotations.tsv").write_text(
        "\n".join(rows) + "\n", encoding="utf-8")


def write_allowlist() -> None:
    lemmas = sorted({sg for sg, _ in SUBJ_NOUNS}
                    | {sg for objs in OBJ_NOUNS.values() for sg, _ in objs}
                    | {"kitten"})
    (FIXTURE_DIR / "pipeline" / "allowlist.txt").write_text(
        "\n".join(lemmas) + "\n", encoding="utf-8")


def write_picks() -> None:
    picks = {
        "language": "en",
        "sources": [CHILD_ID, WIKI_ID],
        "nouns": [
            {"lemma": sg, "source": source}
            for source in (CHILD_ID, WIKI_ID)
            for sg, _ in SUBJ_NOUNS
        ],
        "verbs": [
            {"lemma": lemma, "source": source}
            for source in (CHILD_ID, WIKI_ID)
            for lemma, _, _ in VERBS
        ],
    }
    (FIXTURE_DIR / "pipeline" / "picks.json").write_text(
        json.dumps(picks, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def write_aux(child: list[str], wiki: list[str]) -> None:
    counts = {
        CHILD_ID: Counter(t for line in child for t in line.split()),
        WIKI_ID: Counter(t for line in wiki for t in line.split()),
    }

    def object_entry(sg, pl, source):
        ctx = {"sg": ["the", sg], "pl": ["the", pl]}
        return {
            "entry": {
                "lemma": sg, "form_sg": sg, "form_pl": pl, "pos": "noun",
                "animate": True, "source_corpus": source, "bin": -1,
                "freq": {
                    cid: {"sg": counts[cid][sg], "pl": counts[cid][pl],
                          "combined": counts[cid][sg] + counts[cid][pl]}
                    for cid in (CHILD_ID, WIKI_ID)
                },
            },
            "contexts": {"subj": ctx, "obj": ctx, "pobj": ctx},
        }

    aux = {
        "format": "aux-v1",
        "language": "en",
        "determiners": {"sg": {"default": "the"}, "pl": {"default": "the"}},
        "prepositions": [{"tokens": p, "object_context": "pobj"} for p in PREPS],
        "object_nouns": [
            object_entry(sg, pl, source)
            for source in (CHILD_ID, WIKI_ID)
            for sg, pl in OBJ_NOUNS[source]
        ],
        "rel_verbs": [list(rv) for rv in REL_VERBS],
        "rel_pronouns": {"nom": {"default": "that"},
                         "acc": {"default": "that"}},
        "long_vp_fillers": {lemma: FILLERS[lemma].split()
                            for lemma, _, _ in VERBS},
        "coordinator": "and",
        "rel_clause_commas": False,
    }
    (FIXTURE_DIR / "pipeline" / "aux.json").write_text(
        json.dumps(aux, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def write_config() -> None:
    cfg = {
        "language": "en",
        "corpus_a": {"id": CHILD_ID, "path": "child.txt"},
        "corpus_b": {"id": WIKI_ID, "path": "wiki.txt"},
        "annotations": "annotations.tsv",
        "allowlist": "allowlist.txt",
        "picks": "picks.json",
        "aux": "aux.json",
        "bins": 10,
        "case": "lower",
        "punctuation": "exclude",
        "tokenizer": {"vocab_size": 200},
        "ngram": {"order": 3, "discount": 0.75},
        "scoring": {"region": "critical", "mode": "causal"},
        "regression": {"pooling": "pooled"},
        "out_dir": "out",
    }
    (FIXTURE_DIR / "pipeline" / "config.json").write_text(
        json.dumps(cfg, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def write_scoring_corpus(child: list[str]) -> None:
    # A 50-sentence slice with varied shapes for the oracle-equivalence test.
    lines = child[:50]
    (FIXTURE_DIR / "scoring_corpus.txt").write_text(
        "\n".join(lines) + "\n", encoding="utf-8")


def write_score_fixture() -> None:
    """A small committed benchmark plus matching score records, so the
    score-file ingestion path is exercised without any exporter."""
    from fitclams.bpe import Encoder, train_bpe
    from fitclams.corpus import load_corpus
    from fitclams.ngram import train_ngram
    from fitclams.scoring import ngram_score_record, write_score_records

    corpus = load_corpus(FIXTURE_DIR / "scoring_corpus.txt",
                         corpus_id="scoring-fix")
    bpe = train_bpe(corpus, vocab_size=120)
    model = train_ngram(corpus, bpe, order=3)
    enc = Encoder(bpe)

    bench = [
        {"pair_id": "fx1", "paradigm": "simple_agreement",
         "lexicon_source": "child-fix",
         "grammatical": ["the", "cat", "runs", "."],
         "ungrammatical": ["the", "cats", "runs", "."],
         "critical_start": 2, "critical_end": 3,
         "subject_slot": [1, 2], "metadata": {}},
        {"pair_id": "fx2", "paradigm": "simple_agreement",
         "lexicon_source": "child-fix",
         "grammatical": ["the", "dogs", "wait", "."],
         "ungrammatical": ["the", "dog", "wait", "."],
         "critical_start": 2, "critical_end": 3,
         "subject_slot": [1, 2], "metadata": {}},
        {"pair_id": "fx3", "paradigm": "agreement_vp_coord",
         "lexicon_source": "child-fix",
         "grammatical": ["the", "bird", "sings", "and", "plays"],
         "ungrammatical": ["the", "birds", "sing", "and", "plays"],
         "critical_start": 4, "critical_end": 5,
         "subject_slot": [1, 3], "metadata": {}},
    ]
    out = FIXTURE_DIR / "scores"
    out.mkdir(parents=True, exist_ok=True)
    (out / "benchmark.jsonl").write_text(
        "\n".join(json.dumps(p, sort_keys=True) for p in bench) + "\n",
        encoding="utf-8")
    records = []
    for pair in bench:
        for variant, words in (("gram", pair["grammatical"]),
                               ("ungram", pair["ungrammatical"])):
            records.append(ngram_score_record(
                model, enc, pair["pair_id"], variant, tuple(words)))
    write_score_records(records, out / "records.jsonl")


def main():
    (FIXTURE_DIR / "pipeline").mkdir(parents=True, exist_ok=True)
    child, wiki = write_corpora()
    write_annotations()
    write_allowlist()
    write_picks()
    write_aux(child, wiki)
    write_config()
    write_scoring_corpus(child)
    write_score_fixture()
    print(f"fixtures written under {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
