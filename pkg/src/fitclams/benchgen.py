"""Minimal-pair generation for seven subject-verb agreement paradigms.

Every pair holds the critical verb constant and varies the number of one
subject slot; both number directions serve as the grammatical variant.
The verb agreeing with a varying subject inside the context (relative
clause verbs in subject relatives, the first conjunct in VP coordination)
covaries with it so the context itself stays well formed and only the
critical region carries the violation.

Sentence shape follows the ordering conventions of each language: French
and English pattern together, German uses comma-bracketed, verb-final
relative clauses and case-inflected slots supplied by the aux lexicon.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional

from .lexicon import LexEntry, Lexicon, _entry_from_dict, _entry_to_dict

__all__ = [
    "PARADIGMS",
    "AuxLex",
    "ObjectNoun",
    "MinimalPair",
    "BenchgenError",
    "load_aux",
    "generate",
    "emit_benchmark",
    "read_benchmark",
    "validate_pair",
]

PARADIGMS = (
    "simple_agreement",
    "agreement_prep_phrase",
    "agreement_subj_rel_clause",
    "agreement_obj_rel_clause_across",
    "agreement_obj_rel_clause_within",
    "agreement_vp_coord",
    "agreement_long_vp_coord",
)

AUX_FORMAT = "aux-v1"
BENCHMARK_FORMAT = "benchmark-v1"

NUMBERS = ("sg", "pl")


class BenchgenError(ValueError):
    pass


@dataclass(frozen=True)
class ObjectNoun:
    """An attractor noun with its pre-inflected determiner+noun token runs
    per syntactic context ("subj", "obj", and whatever the prepositions
    reference)."""
    entry: LexEntry
    contexts: dict[str, dict[str, tuple[str, ...]]]

    def tokens(self, context: str, number: str) -> tuple[str, ...]:
        try:
            return self.contexts[context][number]
        except KeyError:
            raise BenchgenError(
                f"object {self.entry.lemma!r} lacks context {context!r} "
                f"({number})") from None


@dataclass(frozen=True)
class Preposition:
    tokens: tuple[str, ...]
    object_context: str = "pobj"


@dataclass(frozen=True)
class AuxLex:
    language: str
    determiners: dict[str, dict[str, str]]       # number -> gender/default -> token
    prepositions: tuple[Preposition, ...]
    object_nouns: tuple[ObjectNoun, ...]
    rel_verbs: tuple[tuple[str, str], ...]       # (sg form, pl form)
    rel_pronouns: dict[str, dict[str, str]]      # case -> gender/pl/default -> token
    long_vp_fillers: dict[str, tuple[str, ...]]  # verb lemma -> filler tokens
    coordinator: str = "and"
    rel_clause_commas: bool = False

    def determiner(self, number: str, gender: Optional[str]) -> str:
        table = self.determiners.get(number, {})
        tok = table.get(gender or "default", table.get("default"))
        if tok is None:
            raise BenchgenError(
                f"no determiner for number={number} gender={gender}")
        return tok

    def rel_pronoun(self, case: str, gender: Optional[str], number: str) -> str:
        table = self.rel_pronouns.get(case, {})
        key = "pl" if number == "pl" else (gender or "default")
        tok = table.get(key, table.get("default"))
        if tok is None:
            raise BenchgenError(
                f"no relative pronoun for case={case} gender={gender} "
                f"number={number}")
        return tok

    def filler(self, verb: LexEntry) -> tuple[str, ...]:
        toks = self.long_vp_fillers.get(verb.lemma)
        if toks is None:
            raise BenchgenError(
                f"no long-VP filler for verb {verb.lemma!r}")
        return toks


def load_aux(path: str | Path) -> AuxLex:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != AUX_FORMAT:
        raise BenchgenError(f"unsupported aux lexicon format in {path}")
    objects = tuple(
        ObjectNoun(
            entry=_entry_from_dict(obj["entry"]),
            contexts={
                name: {n: tuple(toks) for n, toks in by_number.items()}
                for name, by_number in obj["contexts"].items()
            },
        )
        for obj in payload["object_nouns"]
    )
    preps = tuple(
        Preposition(tokens=tuple(p["tokens"]),
                    object_context=p.get("object_context", "pobj"))
        for p in payload["prepositions"]
    )
    return AuxLex(
        language=payload["language"],
        determiners=payload["determiners"],
        prepositions=preps,
        object_nouns=objects,
        rel_verbs=tuple((sg, pl) for sg, pl in payload["rel_verbs"]),
        rel_pronouns=payload.get("rel_pronouns", {}),
        long_vp_fillers={
            k: tuple(v) for k, v in payload.get("long_vp_fillers", {}).items()
        },
        coordinator=payload.get("coordinator", "and"),
        rel_clause_commas=bool(payload.get("rel_clause_commas", False)),
    )


def save_aux(aux: AuxLex, path: str | Path) -> None:
    payload = {
        "format": AUX_FORMAT,
        "language": aux.language,
        "determiners": aux.determiners,
        "prepositions": [
            {"tokens": list(p.tokens), "object_context": p.object_context}
            for p in aux.prepositions
        ],
        "object_nouns": [
            {
                "entry": _entry_to_dict(o.entry),
                "contexts": {
                    name: {n: list(toks) for n, toks in by_number.items()}
                    for name, by_number in o.contexts.items()
                },
            }
            for o in aux.object_nouns
        ],
        "rel_verbs": [list(rv) for rv in aux.rel_verbs],
        "rel_pronouns": aux.rel_pronouns,
        "long_vp_fillers": {k: list(v) for k, v in aux.long_vp_fillers.items()},
        "coordinator": aux.coordinator,
        "rel_clause_commas": aux.rel_clause_commas,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, sort_keys=True, indent=1)
        f.write("\n")


@dataclass(frozen=True)
class MinimalPair:
    pair_id: str
    paradigm: str
    lexicon_source: str
    grammatical: tuple[str, ...]
    ungrammatical: tuple[str, ...]
    critical_start: int
    critical_end: int
    subject_slot: Optional[tuple[int, int]] = None
    metadata: dict = field(default_factory=dict)


def _other(number: str) -> str:
    return "pl" if number == "sg" else "sg"


def _subject_np(entry: LexEntry, number: str, aux: AuxLex) -> list[str]:
    override = entry.det_sg if number == "sg" else entry.det_pl
    det = override if override is not None else aux.determiner(number, entry.gender)
    return [det, entry.form(number)]


def _pair_id(*parts) -> str:
    key = "\x1f".join(str(p) for p in parts)
    return hashlib.sha1(key.encode("utf-8")).hexdigest()[:16]


def _finish(paradigm: str, source: str, build, gram_number: str,
            id_parts: tuple, metadata: dict) -> MinimalPair:
    """Render both variants, locate the difference, and package the pair.

    `build(subj_number)` returns (tokens, critical_index)."""
    gram_tokens, crit_g = build(gram_number)
    ungram_tokens, crit_u = build(_other(gram_number))
    if crit_g != crit_u or len(gram_tokens) != len(ungram_tokens):
        raise BenchgenError(
            f"{paradigm}: variants misaligned for {id_parts}")
    if gram_tokens[crit_g] != ungram_tokens[crit_g]:
        raise BenchgenError(
            f"{paradigm}: critical region differs for {id_parts}")
    diffs = [i for i, (a, b) in enumerate(zip(gram_tokens, ungram_tokens)) if a != b]
    if not diffs:
        raise BenchgenError(f"{paradigm}: identical variants for {id_parts}")
    if crit_g in diffs:
        raise BenchgenError(f"{paradigm}: critical span varies for {id_parts}")
    slot = (diffs[0], diffs[-1] + 1)
    return MinimalPair(
        pair_id=_pair_id(paradigm, source, *id_parts),
        paradigm=paradigm,
        lexicon_source=source,
        grammatical=tuple(gram_tokens),
        ungrammatical=tuple(ungram_tokens),
        critical_start=crit_g,
        critical_end=crit_g + 1,
        subject_slot=slot,
        metadata=metadata,
    )


def _meta(subj: LexEntry, gram_number: str, verb_form: str,
          verb_lemma: str, **extra) -> dict:
    meta = {
        "subject_lemma": subj.lemma,
        "subject_gram_form": subj.form(gram_number),
        "subject_ungram_form": subj.form(_other(gram_number)),
        "gram_number": gram_number,
        "verb_form": verb_form,
        "verb_lemma": verb_lemma,
        "freq": {"subject": subj.freq},
    }
    meta.update(extra)
    return meta


def _gen_simple(nouns, verbs, aux: AuxLex, source: str):
    for subj in nouns:
        for verb in verbs:
            for gram in NUMBERS:
                vform = verb.form(gram)

                def build(n, subj=subj, vform=vform):
                    toks = _subject_np(subj, n, aux) + [vform]
                    return toks, len(toks) - 1

                yield _finish(
                    "simple_agreement", source, build, gram,
                    (subj.lemma, verb.lemma, gram),
                    _meta(subj, gram, vform, verb.lemma,
                          freq_verb=verb.freq),
                )


def _gen_prep(nouns, verbs, aux: AuxLex, source: str, objects):
    if not aux.prepositions:
        raise BenchgenError("agreement_prep_phrase requires prepositions")
    for subj in nouns:
        for verb in verbs:
            for prep in aux.prepositions:
                for obj, obj_number in objects:
                    pobj = obj.tokens(prep.object_context, obj_number)
                    for gram in NUMBERS:
                        vform = verb.form(gram)

                        def build(n, subj=subj, prep=prep, pobj=pobj, vform=vform):
                            toks = (_subject_np(subj, n, aux)
                                    + list(prep.tokens) + list(pobj) + [vform])
                            return toks, len(toks) - 1

                        yield _finish(
                            "agreement_prep_phrase", source, build, gram,
                            (subj.lemma, verb.lemma, " ".join(prep.tokens),
                             obj.entry.lemma, obj_number, gram),
                            _meta(subj, gram, vform, verb.lemma,
                                  preposition=" ".join(prep.tokens),
                                  object_lemma=obj.entry.lemma,
                                  object_number=obj_number,
                                  freq_verb=verb.freq),
                        )


def _gen_subj_rel(nouns, verbs, aux: AuxLex, source: str, objects, language: str):
    if not aux.rel_verbs:
        raise BenchgenError("agreement_subj_rel_clause requires relative-clause verbs")
    for subj in nouns:
        for verb in verbs:
            for rel_sg, rel_pl in aux.rel_verbs:
                for obj, obj_number in objects:
                    obj_toks = obj.tokens("obj", obj_number)
                    for gram in NUMBERS:
                        vform = verb.form(gram)

                        def build(n, subj=subj, rel_sg=rel_sg, rel_pl=rel_pl,
                                  obj_toks=obj_toks, vform=vform):
                            # The relative verb has the head subject as its
                            # own subject, so it covaries with the number.
                            rv = rel_sg if n == "sg" else rel_pl
                            rp = aux.rel_pronoun("nom", subj.gender, n)
                            np = _subject_np(subj, n, aux)
                            if language == "de":
                                toks = np + [",", rp] + list(obj_toks) + [rv, ",", vform]
                            else:
                                toks = np + [rp, rv] + list(obj_toks) + [vform]
                            return toks, len(toks) - 1

                        yield _finish(
                            "agreement_subj_rel_clause", source, build, gram,
                            (subj.lemma, verb.lemma, rel_sg,
                             obj.entry.lemma, obj_number, gram),
                            _meta(subj, gram, vform, verb.lemma,
                                  rel_verb=rel_sg,
                                  object_lemma=obj.entry.lemma,
                                  object_number=obj_number,
                                  freq_verb=verb.freq),
                        )


def _gen_obj_rel_across(nouns, verbs, aux: AuxLex, source: str, objects, language: str):
    if not aux.rel_verbs:
        raise BenchgenError("agreement_obj_rel_clause_across requires relative-clause verbs")
    for subj in nouns:
        for verb in verbs:
            for rel_sg, rel_pl in aux.rel_verbs:
                for obj, obj_number in objects:
                    # Inside the clause the attractor is the subject of the
                    # relative verb, which therefore matches its number.
                    rv = rel_sg if obj_number == "sg" else rel_pl
                    obj_toks = obj.tokens("subj", obj_number)
                    for gram in NUMBERS:
                        vform = verb.form(gram)

                        def build(n, subj=subj, rv=rv, obj_toks=obj_toks, vform=vform):
                            rp = aux.rel_pronoun("acc", subj.gender, n)
                            np = _subject_np(subj, n, aux)
                            if language == "de":
                                toks = np + [",", rp] + list(obj_toks) + [rv, ",", vform]
                            else:
                                toks = np + [rp] + list(obj_toks) + [rv, vform]
                            return toks, len(toks) - 1

                        yield _finish(
                            "agreement_obj_rel_clause_across", source, build, gram,
                            (subj.lemma, verb.lemma, rel_sg,
                             obj.entry.lemma, obj_number, gram),
                            _meta(subj, gram, vform, verb.lemma,
                                  rel_verb=rel_sg,
                                  object_lemma=obj.entry.lemma,
                                  object_number=obj_number,
                                  freq_verb=verb.freq),
                        )


def _gen_obj_rel_within(nouns, verbs, aux: AuxLex, source: str, objects, language: str):
    """Agreement inside the relative clause: the head is the attractor, the
    varying lexicon noun is the clause subject, and the critical verb is
    the relative-clause verb itself."""
    if not aux.rel_verbs:
        raise BenchgenError("agreement_obj_rel_clause_within requires relative-clause verbs")
    for subj in nouns:
        for verb in verbs:
            for rel_sg, rel_pl in aux.rel_verbs:
                for obj, obj_number in objects:
                    head_toks = obj.tokens("subj", obj_number)
                    main_v = verb.form(obj_number)
                    rp = aux.rel_pronoun("acc", obj.entry.gender, obj_number)
                    for gram in NUMBERS:
                        rv = rel_sg if gram == "sg" else rel_pl

                        def build(n, subj=subj, head_toks=head_toks, rp=rp,
                                  rv=rv, main_v=main_v):
                            np = _subject_np(subj, n, aux)
                            if language == "de":
                                toks = list(head_toks) + [",", rp] + np + [rv, ",", main_v]
                                crit = len(head_toks) + 2 + len(np)
                            else:
                                toks = list(head_toks) + [rp] + np + [rv, main_v]
                                crit = len(head_toks) + 1 + len(np)
                            return toks, crit

                        yield _finish(
                            "agreement_obj_rel_clause_within", source, build, gram,
                            (subj.lemma, verb.lemma, rel_sg,
                             obj.entry.lemma, obj_number, gram),
                            _meta(subj, gram, rv, rel_sg,
                                  rel_verb=rel_sg,
                                  main_verb=main_v,
                                  main_verb_lemma=verb.lemma,
                                  object_lemma=obj.entry.lemma,
                                  object_number=obj_number,
                                  freq_verb=verb.freq),
                        )


def _gen_vp_coord(nouns, verbs, aux: AuxLex, source: str, long: bool):
    paradigm = "agreement_long_vp_coord" if long else "agreement_vp_coord"
    if len(verbs) < 2:
        raise BenchgenError(f"{paradigm} requires at least two verbs")
    for v1, v2 in combinations(verbs, 2):
        fill1 = aux.filler(v1) if long else ()
        fill2 = aux.filler(v2) if long else ()
        for subj in nouns:
            for gram in NUMBERS:
                vform = v2.form(gram)

                def build(n, subj=subj, v1=v1, vform=vform,
                          fill1=fill1, fill2=fill2):
                    # The first conjunct shares the subject, so it covaries.
                    toks = (_subject_np(subj, n, aux) + [v1.form(n)]
                            + list(fill1) + [aux.coordinator, vform]
                            + list(fill2))
                    crit = len(toks) - len(fill2) - 1
                    return toks, crit

                yield _finish(
                    paradigm, source, build, gram,
                    (subj.lemma, v1.lemma, v2.lemma, gram),
                    _meta(subj, gram, vform, v2.lemma,
                          coord_verb=v1.lemma,
                          freq_verb=v2.freq),
                )


def generate(lexicon: Lexicon, aux: AuxLex, paradigms=PARADIGMS,
             language: Optional[str] = None,
             sources: Optional[list[str]] = None) -> list[MinimalPair]:
    """Full cross-product over the lexicon for the requested paradigms and
    lexical sources, deterministically ordered by (paradigm, pair_id)."""
    language = language or lexicon.language
    unknown = set(paradigms) - set(PARADIGMS)
    if unknown:
        raise BenchgenError(f"unknown paradigms: {sorted(unknown)}")
    sources = list(sources) if sources else list(lexicon.sources)

    pairs: list[MinimalPair] = []
    for source in sources:
        nouns = lexicon.entries("noun", source)
        verbs = lexicon.entries("verb", source)
        if not nouns or not verbs:
            raise BenchgenError(
                f"lexicon has no nouns or verbs for source {source!r}")
        objects = [
            (o, n)
            for o in aux.object_nouns if o.entry.source_corpus == source
            for n in NUMBERS
        ]
        needs_objects = {"agreement_prep_phrase", "agreement_subj_rel_clause",
                         "agreement_obj_rel_clause_across",
                         "agreement_obj_rel_clause_within"} & set(paradigms)
        if needs_objects and not objects:
            raise BenchgenError(
                f"paradigms {sorted(needs_objects)} require object nouns "
                f"for source {source!r}")

        for paradigm in paradigms:
            if paradigm == "simple_agreement":
                pairs.extend(_gen_simple(nouns, verbs, aux, source))
            elif paradigm == "agreement_prep_phrase":
                pairs.extend(_gen_prep(nouns, verbs, aux, source, objects))
            elif paradigm == "agreement_subj_rel_clause":
                pairs.extend(_gen_subj_rel(nouns, verbs, aux, source, objects, language))
            elif paradigm == "agreement_obj_rel_clause_across":
                pairs.extend(_gen_obj_rel_across(nouns, verbs, aux, source, objects, language))
            elif paradigm == "agreement_obj_rel_clause_within":
                pairs.extend(_gen_obj_rel_within(nouns, verbs, aux, source, objects, language))
            elif paradigm == "agreement_vp_coord":
                pairs.extend(_gen_vp_coord(nouns, verbs, aux, source, long=False))
            elif paradigm == "agreement_long_vp_coord":
                pairs.extend(_gen_vp_coord(nouns, verbs, aux, source, long=True))

    pairs.sort(key=lambda p: (p.paradigm, p.pair_id))
    ids = [p.pair_id for p in pairs]
    if len(set(ids)) != len(ids):
        raise BenchgenError("pair_id collision; slot fillers not unique")
    return pairs


def validate_pair(pair: MinimalPair) -> None:
    """Re-check the pair-difference invariant on a materialized pair."""
    g, u = pair.grammatical, pair.ungrammatical
    if len(g) != len(u):
        raise BenchgenError(f"{pair.pair_id}: variant lengths differ")
    diffs = [i for i, (a, b) in enumerate(zip(g, u)) if a != b]
    if not diffs:
        raise BenchgenError(f"{pair.pair_id}: variants identical")
    cs, ce = pair.critical_start, pair.critical_end
    if g[cs:ce] != u[cs:ce]:
        raise BenchgenError(f"{pair.pair_id}: critical spans differ")
    if any(cs <= i < ce for i in diffs):
        raise BenchgenError(f"{pair.pair_id}: critical span varies")
    if pair.subject_slot is not None:
        lo, hi = pair.subject_slot
        if diffs[0] < lo or diffs[-1] >= hi:
            raise BenchgenError(f"{pair.pair_id}: difference outside subject slot")
        if lo < ce and cs < hi:
            raise BenchgenError(f"{pair.pair_id}: subject slot overlaps critical span")


def emit_benchmark(pairs: list[MinimalPair], path: str | Path,
                   manifest: Optional[dict] = None) -> None:
    """One JSON object per line in (paradigm, pair_id) order, plus a
    sidecar manifest. Identical inputs yield byte-identical files."""
    path = Path(path)
    ordered = sorted(pairs, key=lambda p: (p.paradigm, p.pair_id))
    with open(path, "w", encoding="utf-8") as f:
        for p in ordered:
            record = {
                "pair_id": p.pair_id,
                "paradigm": p.paradigm,
                "lexicon_source": p.lexicon_source,
                "grammatical": list(p.grammatical),
                "ungrammatical": list(p.ungrammatical),
                "critical_start": p.critical_start,
                "critical_end": p.critical_end,
                "subject_slot": list(p.subject_slot) if p.subject_slot else None,
                "metadata": p.metadata,
            }
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            f.write("\n")
    if manifest is not None:
        counts: dict[str, int] = {}
        for p in ordered:
            counts[p.paradigm] = counts.get(p.paradigm, 0) + 1
        sidecar = dict(manifest)
        sidecar["pair_counts"] = counts
        with open(path.with_suffix(path.suffix + ".manifest.json"), "w",
                  encoding="utf-8") as f:
            json.dump(sidecar, f, ensure_ascii=False, sort_keys=True, indent=1)
            f.write("\n")


def read_benchmark(path: str | Path) -> list[MinimalPair]:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                pairs.append(MinimalPair(
                    pair_id=d["pair_id"],
                    paradigm=d["paradigm"],
                    lexicon_source=d["lexicon_source"],
                    grammatical=tuple(d["grammatical"]),
                    ungrammatical=tuple(d["ungrammatical"]),
                    critical_start=d["critical_start"],
                    critical_end=d["critical_end"],
                    subject_slot=(tuple(d["subject_slot"])
                                  if d.get("subject_slot") else None),
                    metadata=d.get("metadata", {}),
                ))
            except (KeyError, json.JSONDecodeError) as exc:
                raise BenchgenError(f"{path}:{lineno}: bad benchmark line: {exc}") from exc
    return pairs
