#!/usr/bin/env python3
"""Regenerate the shipped per-language lexicon and aux files under
src/fitclams/data/ from the tables inlined below.

Run from the repository root: python3 tools/build_shipped_data.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fitclams.benchgen import AuxLex, ObjectNoun, Preposition, save_aux
from fitclams.lexicon import LexEntry, Lexicon, save_lexicon

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "fitclams" / "data"


def noun(lemma, sg, pl, source, bin_, freq_sg, gender=None, det_sg=None,
         det_pl=None, cross=None):
    freq = {source: {"sg": freq_sg}}
    if cross:
        freq.update(cross)
    return LexEntry(lemma=lemma, form_sg=sg, form_pl=pl, pos="noun",
                    freq=freq, bin=bin_, source_corpus=source, animate=True,
                    gender=gender, det_sg=det_sg, det_pl=det_pl)


def verb(lemma, sg, pl, source, bin_, freq_sg, cross=None):
    freq = {source: {"sg": freq_sg}}
    if cross:
        freq.update(cross)
    return LexEntry(lemma=lemma, form_sg=sg, form_pl=pl, pos="verb",
                    freq=freq, bin=bin_, source_corpus=source)


def obj(lemma, sg, pl, source, bin_, freq_sg, contexts, gender=None):
    return ObjectNoun(
        entry=LexEntry(lemma=lemma, form_sg=sg, form_pl=pl, pos="noun",
                       freq={source: {"sg": freq_sg}}, bin=bin_,
                       source_corpus=source, animate=True, gender=gender),
        contexts={name: {n: tuple(t.split()) for n, t in by_num.items()}
                  for name, by_num in contexts.items()},
    )


# ---------------------------------------------------------------- English

EN_C, EN_W = "childes-en", "wiki-en"

EN_NOUNS = [
    noun("roommate", "roommate", "roommates", EN_C, 0, 2),
    noun("resident", "resident", "residents", EN_C, 1, 6,
         cross={EN_W: {"sg": 304}}),
    noun("librarian", "librarian", "librarians", EN_C, 2, 13),
    noun("officer", "officer", "officers", EN_C, 3, 36),
    noun("toddler", "toddler", "toddlers", EN_C, 4, 90),
    noun("farmer", "farmer", "farmers", EN_C, 5, 264,
         cross={EN_W: {"sg": 169}}),
    noun("policeman", "policeman", "policemen", EN_C, 6, 380),
    noun("doctor", "doctor", "doctors", EN_C, 7, 656),
    noun("man", "man", "men", EN_C, 8, 2156),
    noun("daddy", "daddy", "daddies", EN_C, 9, 7027,
         cross={EN_W: {"sg": 5}}),
    noun("picker", "picker", "pickers", EN_W, 0, 2,
         cross={EN_C: {"sg": 16}}),
    noun("harvester", "harvester", "harvesters", EN_W, 0, 3),
    noun("fireman", "fireman", "firemen", EN_W, 1, 11),
    noun("superhero", "superhero", "superheroes", EN_W, 3, 27),
    noun("explorer", "explorer", "explorers", EN_W, 4, 72),
    noun("painter", "painter", "painters", EN_W, 5, 161,
         cross={EN_C: {"sg": 4}}),
    noun("parent", "parent", "parents", EN_W, 6, 358),
    noun("writer", "writer", "writers", EN_W, 7, 629),
    noun("president", "president", "presidents", EN_W, 8, 1473,
         cross={EN_C: {"sg": 49}}),
    noun("group", "group", "groups", EN_W, 9, 3085),
]

EN_VERBS = [
    verb("await", "awaits", "await", EN_C, 0, 2, cross={EN_W: {"sg": 12}}),
    verb("complain", "complains", "complain", EN_C, 1, 8),
    verb("arrive", "arrives", "arrive", EN_C, 2, 17, cross={EN_W: {"sg": 102}}),
    verb("disappear", "disappears", "disappear", EN_C, 2, 42),
    verb("bow", "bows", "bow", EN_C, 4, 243),
    verb("hide", "hides", "hide", EN_C, 4, 391),
    verb("leave", "leaves", "leave", EN_C, 6, 1793),
    verb("sit", "sits", "sit", EN_C, 7, 4219),
    verb("think", "thinks", "think", EN_C, 8, 14710, cross={EN_W: {"sg": 227}}),
    verb("go", "goes", "go", EN_C, 9, 27620),
    verb("grind", "grinds", "grind", EN_W, 0, 4),
    verb("exaggerate", "exaggerates", "exaggerate", EN_W, 1, 6,
         cross={EN_C: {"sg": 2}}),
    verb("scream", "screams", "scream", EN_W, 2, 13),
    verb("swim", "swims", "swim", EN_W, 3, 31),
    verb("enjoy", "enjoys", "enjoy", EN_W, 4, 93, cross={EN_C: {"sg": 55}}),
    verb("draw", "draws", "draw", EN_W, 5, 212),
    verb("rest", "rests", "rest", EN_W, 6, 516),
    verb("run", "runs", "run", EN_W, 6, 975),
    verb("play", "plays", "play", EN_W, 7, 1233),
    verb("work", "works", "work", EN_W, 8, 3545, cross={EN_C: {"sg": 2012}}),
]

EN_FILLERS = {
    "await": "the guests",
    "complain": "about the noise",
    "arrive": "at the station",
    "disappear": "from the scene",
    "bow": "to the king",
    "hide": "from the chicken",
    "leave": "the room",
    "sit": "in the car",
    "think": "about the trip",
    "go": "to the new store",
    "grind": "the coffee beans",
    "exaggerate": "with laughs",
    "scream": "very loudly",
    "swim": "in the pool",
    "enjoy": "the company of friends",
    "draw": "a nice picture",
    "rest": "on the couch",
    "run": "at the park",
    "play": "with the toys",
    "work": "on a new project",
}


def en_obj(lemma, pl, source, bin_, freq_sg):
    ctx = {"sg": f"the {lemma}", "pl": f"the {pl}"}
    return obj(lemma, lemma, pl, source, bin_, freq_sg,
               {"subj": ctx, "obj": ctx, "pobj": ctx})


EN_AUX = AuxLex(
    language="en",
    determiners={"sg": {"default": "the"}, "pl": {"default": "the"}},
    prepositions=tuple(Preposition(tokens=tuple(p.split())) for p in [
        "next to", "behind", "in front of", "near", "to the side of",
        "across from",
    ]),
    object_nouns=(
        en_obj("guard", "guards", EN_C, 3, 35),
        en_obj("friend", "friends", EN_C, 7, 1414),
        en_obj("waiter", "waiters", EN_W, 1, 10),
        en_obj("speaker", "speakers", EN_W, 6, 347),
    ),
    rel_verbs=(("likes", "like"), ("hates", "hate"), ("loves", "love"),
               ("admires", "admire")),
    rel_pronouns={"nom": {"default": "that"}, "acc": {"default": "that"}},
    long_vp_fillers={k: tuple(v.split()) for k, v in EN_FILLERS.items()},
    coordinator="and",
)

# ----------------------------------------------------------------- French

FR_C, FR_W = "childes-fr", "wiki-fr"

FR_NOUNS = [
    noun("visiteur", "visiteur", "visiteurs", FR_C, 0, 3, gender="m"),
    noun("joueur", "joueur", "joueurs", FR_C, 1, 8, gender="m"),
    noun("chanteur", "chanteur", "chanteurs", FR_C, 2, 13, gender="m"),
    noun("capitaine", "capitaine", "capitaines", FR_C, 3, 32, gender="m"),
    noun("homme", "homme", "hommes", FR_C, 5, 84, gender="m", det_sg="l'"),
    noun("pompier", "pompier", "pompiers", FR_C, 6, 171, gender="m"),
    noun("dame", "dame", "dames", FR_C, 6, 311, gender="f"),
    noun("enfant", "enfant", "enfants", FR_C, 7, 667, gender="m", det_sg="l'"),
    noun("lapin", "lapin", "lapins", FR_C, 8, 972, gender="m"),
    noun("gamin", "gamin", "gamins", FR_W, 0, 3, gender="m"),
    noun("cuisinier", "cuisinier", "cuisiniers", FR_W, 2, 11, gender="m"),
    noun("vilaine", "vilaine", "vilaines", FR_W, 3, 18, gender="f"),
    noun("avocat", "avocat", "avocats", FR_W, 4, 55, gender="m", det_sg="l'"),
    noun("pilote", "pilote", "pilotes", FR_W, 6, 192, gender="m"),
    noun("lecteur", "lecteur", "lecteurs", FR_W, 6, 144, gender="m"),
    noun("prince", "prince", "princes", FR_W, 7, 480, gender="m"),
    noun("personnage", "personnage", "personnages", FR_W, 8, 996, gender="m"),
    noun("groupe", "groupe", "groupes", FR_W, 9, 1610, gender="m"),
]

FR_VERBS = [
    verb("poursuivre", "poursuit", "poursuivent", FR_C, 0, 4),
    verb("grandir", "grandit", "grandissent", FR_C, 1, 19),
    verb("apprendre", "apprend", "apprennent", FR_C, 3, 65),
    verb("descendre", "descend", "descendent", FR_C, 4, 185),
    verb("attendre", "attend", "attendent", FR_C, 5, 258),
    verb("arriver", "arrive", "arrivent", FR_C, 6, 973),
    verb("mettre", "met", "mettent", FR_C, 7, 1993),
    verb("casser", "casse", "cassent", FR_W, 1, 21),
    verb("rentrer", "rentre", "rentrent", FR_W, 2, 62),
    verb("continuer", "continue", "continuent", FR_W, 5, 223),
    verb("suivre", "suit", "suivent", FR_W, 5, 316),
    verb("rendre", "rend", "rendent", FR_W, 6, 381),
    verb("aller", "va", "vont", FR_W, 7, 575),
    verb("permettre", "permet", "permettent", FR_W, 8, 1062),
]

FR_FILLERS = {
    "poursuivre": "une nouvelle mission",
    "grandir": "très rapidement",
    "apprendre": "une nouvelle histoire",
    "descendre": "les escaliers de la maison",
    "attendre": "le repas chaud",
    "arriver": "au lieu de rendez-vous",
    "mettre": "la nappe sur la table",
    "casser": "le verre",
    "rentrer": "dans la chambre",
    "continuer": "sur la route",
    "suivre": "le long chemin",
    "rendre": "le stylo à sa maman",
    "aller": "au marché",
    "permettre": "l' accès aux escaliers",
}

FR_AUX = AuxLex(
    language="fr",
    determiners={"sg": {"m": "le", "f": "la"}, "pl": {"default": "les"}},
    prepositions=(
        Preposition(tokens=("devant",), object_context="pobj_plain"),
        Preposition(tokens=("derrière",), object_context="pobj_plain"),
        Preposition(tokens=("en", "face"), object_context="pobj_de"),
        Preposition(tokens=("à", "côté"), object_context="pobj_de"),
        Preposition(tokens=("près",), object_context="pobj_de"),
    ),
    object_nouns=(
        obj("femme", "femme", "femmes", FR_C, 4, 71, gender="f", contexts={
            "subj": {"sg": "la femme", "pl": "les femmes"},
            "obj": {"sg": "la femme", "pl": "les femmes"},
            "pobj_plain": {"sg": "la femme", "pl": "les femmes"},
            "pobj_de": {"sg": "de la femme", "pl": "des femmes"},
        }),
        obj("adulte", "adulte", "adultes", FR_C, 3, 35, gender="m", contexts={
            "subj": {"sg": "l' adulte", "pl": "les adultes"},
            "obj": {"sg": "l' adulte", "pl": "les adultes"},
            "pobj_plain": {"sg": "l' adulte", "pl": "les adultes"},
            "pobj_de": {"sg": "de l' adulte", "pl": "des adultes"},
        }),
        obj("constructeur", "constructeur", "constructeurs", FR_W, 5, 106,
            gender="m", contexts={
                "subj": {"sg": "le constructeur", "pl": "les constructeurs"},
                "obj": {"sg": "le constructeur", "pl": "les constructeurs"},
                "pobj_plain": {"sg": "le constructeur", "pl": "les constructeurs"},
                "pobj_de": {"sg": "du constructeur", "pl": "des constructeurs"},
            }),
        obj("docteur", "docteur", "docteurs", FR_W, 5, 85, gender="m",
            contexts={
                "subj": {"sg": "le docteur", "pl": "les docteurs"},
                "obj": {"sg": "le docteur", "pl": "les docteurs"},
                "pobj_plain": {"sg": "le docteur", "pl": "les docteurs"},
                "pobj_de": {"sg": "du docteur", "pl": "des docteurs"},
            }),
    ),
    rel_verbs=(("aime", "aiment"),),
    rel_pronouns={"nom": {"default": "qui"}, "acc": {"default": "que"}},
    long_vp_fillers={k: tuple(v.split()) for k, v in FR_FILLERS.items()},
    coordinator="et",
)

# ----------------------------------------------------------------- German

DE_C, DE_W = "childes-de", "wiki-de"

DE_NOUNS = [
    noun("feind", "feind", "feinde", DE_C, 0, 4, gender="m"),
    noun("architekt", "architekt", "architekten", DE_C, 0, 4, gender="m"),
    noun("präsident", "präsident", "präsidenten", DE_C, 1, 6, gender="m"),
    noun("kollege", "kollege", "kollegen", DE_C, 2, 17, gender="m"),
    noun("ingenieur", "ingenieur", "ingenieure", DE_C, 3, 26, gender="m"),
    noun("sohn", "sohn", "söhne", DE_C, 4, 96, gender="m"),
    noun("arzt", "arzt", "ärzte", DE_C, 5, 161, gender="m"),
    noun("doktor", "doktor", "doktoren", DE_C, 6, 295, gender="m"),
    noun("mensch", "mensch", "menschen", DE_C, 7, 1247, gender="m"),
    noun("frau", "frau", "frauen", DE_C, 8, 1841, gender="f"),
    noun("fahrgast", "fahrgast", "fahrgäste", DE_W, 1, 8, gender="m"),
    noun("kleinkind", "kleinkind", "kleinkinder", DE_W, 2, 12, gender="n"),
    noun("zwilling", "zwilling", "zwillinge", DE_W, 3, 23, gender="m"),
    noun("polizist", "polizist", "polizisten", DE_W, 3, 39, gender="m"),
    noun("kunde", "kunde", "kunden", DE_W, 5, 105, gender="m"),
    noun("schwester", "schwester", "schwestern", DE_W, 5, 171, gender="f"),
    noun("bruder", "bruder", "brüder", DE_W, 6, 374, gender="m"),
    noun("vater", "vater", "väter", DE_W, 7, 736, gender="m"),
    noun("mann", "mann", "männer", DE_W, 7, 642, gender="m"),
    noun("person", "person", "personen", DE_W, 8, 1114, gender="f"),
]

DE_VERBS = [
    verb("zweifeln", "zweifelt", "zweifeln", DE_C, 0, 4),
    verb("konstruieren", "konstruiert", "konstruieren", DE_C, 1, 5),
    verb("fürchten", "fürchtet", "fürchten", DE_C, 3, 31),
    verb("schälen", "schält", "schälen", DE_C, 3, 40),
    verb("tauchen", "taucht", "tauchen", DE_C, 4, 64),
    verb("kennen", "kennt", "kennen", DE_C, 5, 259),
    verb("schreiben", "schreibt", "schreiben", DE_C, 7, 865),
    verb("erzählen", "erzählt", "erzählen", DE_C, 7, 1081),
    verb("spielen", "spielt", "spielen", DE_C, 8, 3149),
    verb("kommen", "kommt", "kommen", DE_C, 9, 8982),
    verb("schaukeln", "schaukelt", "schaukeln", DE_W, 0, 2),
    verb("flüchten", "flüchtet", "flüchten", DE_W, 2, 13),
    verb("riechen", "riecht", "riechen", DE_W, 2, 12),
    verb("wandern", "wandert", "wandern", DE_W, 4, 36),
    verb("feiern", "feiert", "feiern", DE_W, 4, 48),
    verb("verschwinden", "verschwindet", "verschwinden", DE_W, 5, 68),
    verb("denken", "denkt", "denken", DE_W, 6, 210),
    verb("sprechen", "spricht", "sprechen", DE_W, 7, 529),
    verb("arbeiten", "arbeitet", "arbeiten", DE_W, 8, 640),
    verb("liegen", "liegt", "liegen", DE_W, 9, 2220),
]

DE_FILLERS = {
    "zweifeln": "am wetter",
    "konstruieren": "ein modell",
    "fürchten": "den starken sturm",
    "schälen": "den reifen grünen apfel",
    "tauchen": "in das wasser des meeres",
    "kennen": "die antwort auf die frage",
    "schreiben": "einen brief an verwandte",
    "erzählen": "eine geschichte über die ferien",
    "spielen": "mit dem ball auf dem hof",
    "kommen": "mit dem bus zum tennisplatz",
    "schaukeln": "auf dem spielplatz",
    "flüchten": "vor dem feuer",
    "riechen": "den duft von frischem kaffee",
    "wandern": "durch den wald",
    "feiern": "den geburtstag des großvaters",
    "verschwinden": "im nebel",
    "denken": "an blumen im garten",
    "sprechen": "über das abendessen",
    "arbeiten": "an einem projekt",
    "liegen": "auf dem boden",
}

DE_AUX = AuxLex(
    language="de",
    determiners={"sg": {"m": "der", "f": "die", "n": "das"},
                 "pl": {"default": "die"}},
    prepositions=(
        Preposition(tokens=("vor",)),
        Preposition(tokens=("hinter",)),
        Preposition(tokens=("neben",)),
        Preposition(tokens=("in", "der", "nähe", "von")),
        Preposition(tokens=("gegenüber",)),
    ),
    object_nouns=(
        obj("mitglied", "mitglied", "mitglieder", DE_C, 1, 8, gender="n",
            contexts={
                "subj": {"sg": "das mitglied", "pl": "die mitglieder"},
                "obj": {"sg": "das mitglied", "pl": "die mitglieder"},
                "pobj": {"sg": "dem mitglied", "pl": "den mitgliedern"},
            }),
        obj("bauer", "bauer", "bauern", DE_C, 6, 332, gender="m", contexts={
            "subj": {"sg": "der bauer", "pl": "die bauern"},
            "obj": {"sg": "den bauern", "pl": "die bauern"},
            "pobj": {"sg": "dem bauern", "pl": "den bauern"},
        }),
        obj("matrose", "matrose", "matrosen", DE_W, 1, 11, gender="m",
            contexts={
                "subj": {"sg": "der matrose", "pl": "die matrosen"},
                "obj": {"sg": "den matrosen", "pl": "die matrosen"},
                "pobj": {"sg": "dem matrosen", "pl": "den matrosen"},
            }),
        obj("familie", "familie", "familien", DE_W, 8, 959, gender="f",
            contexts={
                "subj": {"sg": "die familie", "pl": "die familien"},
                "obj": {"sg": "die familie", "pl": "die familien"},
                "pobj": {"sg": "der familie", "pl": "den familien"},
            }),
    ),
    rel_verbs=(("mag", "mögen"), ("vermeidet", "vermeiden")),
    rel_pronouns={"nom": {"m": "der", "f": "die", "n": "das", "pl": "die"},
                  "acc": {"m": "den", "f": "die", "n": "das", "pl": "die"}},
    long_vp_fillers={k: tuple(v.split()) for k, v in DE_FILLERS.items()},
    coordinator="und",
    rel_clause_commas=True,
)


def main():
    for lang, sources, nouns, verbs, aux in [
        ("en", (EN_C, EN_W), EN_NOUNS, EN_VERBS, EN_AUX),
        ("fr", (FR_C, FR_W), FR_NOUNS, FR_VERBS, FR_AUX),
        ("de", (DE_C, DE_W), DE_NOUNS, DE_VERBS, DE_AUX),
    ]:
        out = DATA_DIR / lang
        out.mkdir(parents=True, exist_ok=True)
        lexicon = Lexicon(language=lang, sources=sources,
                          nouns=tuple(nouns), verbs=tuple(verbs))
        save_lexicon(lexicon, out / "lexicon.json")
        save_aux(aux, out / "aux.json")
        print(f"wrote {out}/lexicon.json and {out}/aux.json")


if __name__ == "__main__":
    main()
