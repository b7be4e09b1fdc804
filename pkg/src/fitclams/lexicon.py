"""Shared-vocabulary lexicon construction with log-scale frequency binning.

Candidate subjects and verbs come from a pre-annotated token stream
(tab-separated FORM LEMMA UPOS FEATS). Nouns must be on the animacy
allowlist and attested in both corpora in both numbers; verbs must be
third-person present indicative in both numbers. Candidates are then
binned by log frequency and a hand-authored picks file is validated and
frozen into a Lexicon.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Iterable, Iterator, Optional

log = logging.getLogger(__name__)

__all__ = [
    "AnnotatedToken",
    "LexEntry",
    "BinSpec",
    "Lexicon",
    "LexiconError",
    "read_annotations",
    "shared_vocabulary",
    "filter_candidates",
    "bin_of",
    "assign_bins",
    "select_per_bin",
    "save_lexicon",
    "load_lexicon",
]

FEAT_KEYS = frozenset({"Number", "Person", "Tense", "Mood", "VerbForm", "Case"})

LEXICON_FORMAT = "lexicon-v1"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotatedToken:
    form: str
    lemma: str
    upos: str
    feats: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    form_sg: str
    form_pl: str
    pos: str                      # "noun" | "verb"
    # corpus id -> {"sg": n, "pl": n, "combined": n}; counts may be absent
    # for corpora the entry was never counted in.
    freq: dict[str, dict[str, int]] = field(default_factory=dict)
    bin: int = -1                 # -1 while unassigned
    source_corpus: str = ""
    animate: bool = False
    gender: Optional[str] = None  # "m" | "f" | "n" where the language needs it
    det_sg: Optional[str] = None  # per-entry determiner overrides
    det_pl: Optional[str] = None

    def form(self, number: str) -> str:
        if number == "sg":
            return self.form_sg
        if number == "pl":
            return self.form_pl
        raise ValueError(f"unknown number {number!r}")

    def binning_freq(self, corpus_id: str) -> int:
        """The frequency binning operates on: the singular form's count."""
        try:
            return self.freq[corpus_id]["sg"]
        except KeyError:
            raise LexiconError(
                f"entry {self.lemma!r} has no singular-form count for corpus "
                f"{corpus_id!r}") from None


@dataclass(frozen=True)
class BinSpec:
    num_bins: int = 10
    f_min: int = 1
    f_max: int = 2

    def __post_init__(self):
        if self.f_min < 1:
            raise LexiconError(f"f_min must be >= 1, got {self.f_min}")
        if self.f_max <= self.f_min:
            raise LexiconError(
                f"f_max ({self.f_max}) must exceed f_min ({self.f_min})")
        if self.num_bins < 1:
            raise LexiconError(f"num_bins must be >= 1, got {self.num_bins}")


def bin_of(f: int, spec: BinSpec) -> int:
    """Uniform bins on a log scale: floor(B * (ln f - ln f_min) / (ln f_max
    - ln f_min)), clamped to [0, B-1]."""
    if f < 1:
        raise LexiconError(f"frequency must be >= 1, got {f}")
    if f <= spec.f_min:
        return 0
    if f >= spec.f_max:
        return spec.num_bins - 1
    span = math.log(spec.f_max) - math.log(spec.f_min)
    raw = int(math.floor(spec.num_bins * (math.log(f) - math.log(spec.f_min)) / span))
    return min(max(raw, 0), spec.num_bins - 1)


def read_annotations(path: str | Path) -> Iterator[AnnotatedToken]:
    """Parse FORM<TAB>LEMMA<TAB>UPOS<TAB>FEATS lines; FEATS is
    "Key=Val|Key=Val" or "_". Only the morphological keys the filters use
    are kept. Raises LexiconError with the offending line number."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise LexiconError(
                    f"{path}:{lineno}: expected 4 tab-separated columns, "
                    f"got {len(cols)}")
            form, lemma, upos, feats_str = cols
            if not form:
                raise LexiconError(f"{path}:{lineno}: empty FORM column")
            feats = {}
            if feats_str and feats_str != "_":
                for item in feats_str.split("|"):
                    if "=" not in item:
                        raise LexiconError(
                            f"{path}:{lineno}: malformed feature {item!r}")
                    key, val = item.split("=", 1)
                    if key in FEAT_KEYS:
                        feats[key] = val
            yield AnnotatedToken(form=form, lemma=lemma, upos=upos, feats=feats)


def shared_vocabulary(c1, c2) -> frozenset[str]:
    """Forms attested at least once in both corpora. Computed on whole
    words, before any subword tokenization."""
    v1 = {t for s in c1.sentences for t in s.tokens}
    v2 = {t for s in c2.sentences for t in s.tokens}
    return frozenset(v1 & v2)


def _noun_evidence(tok: AnnotatedToken, allowlist: frozenset[str],
                   language: str) -> Optional[str]:
    if tok.upos != "NOUN" or tok.lemma not in allowlist:
        return None
    if language == "de" and tok.feats.get("Case") != "Nom":
        return None
    number = tok.feats.get("Number")
    if number == "Sing":
        return "sg"
    if number == "Plur":
        return "pl"
    return None


def _verb_evidence(tok: AnnotatedToken, language: str) -> Optional[str]:
    if tok.upos != "VERB":
        return None
    mood = tok.feats.get("Mood")
    if mood in ("Sub", "Cnd"):
        return None
    verbform = tok.feats.get("VerbForm")
    if language == "en":
        # English present-tense tag classes carry no mood; the plural form
        # coincides with the base/infinitive form.
        if (verbform == "Fin" and tok.feats.get("Tense") == "Pres"
                and tok.feats.get("Person") == "3"
                and tok.feats.get("Number") == "Sing"):
            return "sg"
        if verbform == "Inf":
            return "pl"
        if (verbform == "Fin" and tok.feats.get("Tense") == "Pres"
                and tok.feats.get("Number") != "Sing"):
            return "pl"
        return None
    if mood != "Ind":
        return None
    if (verbform != "Fin" or tok.feats.get("Tense") != "Pres"
            or tok.feats.get("Person") != "3"):
        return None
    number = tok.feats.get("Number")
    if number == "Sing":
        return "sg"
    if number == "Plur":
        return "pl"
    return None


def filter_candidates(tokens: Iterable[AnnotatedToken], pos: str,
                      animacy_allowlist: Iterable[str],
                      shared: frozenset[str],
                      freq_tables: dict[str, dict[str, int]],
                      language: str = "en",
                      case_fold: bool = True) -> list[LexEntry]:
    """Collect candidate lemmas with both number forms in the shared
    vocabulary. Returns unbinned entries (bin=-1, no source corpus); use
    assign_bins() per distribution afterwards."""
    if pos not in ("noun", "verb"):
        raise LexiconError(f"pos must be 'noun' or 'verb', got {pos!r}")
    allow = frozenset(animacy_allowlist)

    # lemma -> {"sg": {form, ...}, "pl": {form, ...}}
    forms: dict[str, dict[str, set[str]]] = {}
    for tok in tokens:
        if pos == "noun":
            number = _noun_evidence(tok, allow, language)
        else:
            number = _verb_evidence(tok, language)
        if number is None:
            continue
        form = tok.form.lower() if case_fold else tok.form
        lemma = tok.lemma.lower() if case_fold else tok.lemma
        if form not in shared:
            continue
        forms.setdefault(lemma, {"sg": set(), "pl": set()})[number].add(form)

    def combined_count(form: str) -> int:
        return sum(table.get(form, 0) for table in freq_tables.values())

    entries = []
    for lemma in sorted(forms):
        by_number = forms[lemma]
        if not by_number["sg"] or not by_number["pl"]:
            continue
        # Representative form per number: highest combined count, then
        # lexicographically smallest, so the choice is deterministic.
        form_sg = min(by_number["sg"], key=lambda f: (-combined_count(f), f))
        form_pl = min(by_number["pl"], key=lambda f: (-combined_count(f), f))
        if form_sg == form_pl:
            continue
        freq = {
            cid: {
                "sg": table.get(form_sg, 0),
                "pl": table.get(form_pl, 0),
                "combined": table.get(form_sg, 0) + table.get(form_pl, 0),
            }
            for cid, table in freq_tables.items()
        }
        if any(f["sg"] < 1 or f["pl"] < 1 for f in freq.values()):
            continue
        entries.append(LexEntry(
            lemma=lemma, form_sg=form_sg, form_pl=form_pl, pos=pos,
            freq=freq, animate=(pos == "noun"),
        ))
    return entries


def pool_spec(entries: list[LexEntry], source_corpus: str,
              num_bins: int = 10) -> BinSpec:
    """Default bin edges: the candidate pool's observed frequency extremes
    in the source corpus."""
    if not entries:
        raise LexiconError("cannot derive bin edges from an empty pool")
    freqs = [e.binning_freq(source_corpus) for e in entries]
    f_min, f_max = min(freqs), max(freqs)
    if f_max <= f_min:
        f_max = f_min + 1
    return BinSpec(num_bins=num_bins, f_min=f_min, f_max=f_max)


def assign_bins(entries: list[LexEntry], source_corpus: str,
                spec: Optional[BinSpec] = None,
                num_bins: int = 10) -> tuple[list[LexEntry], BinSpec]:
    """View of the candidate pool under one corpus distribution: each entry
    gets its bin from its singular-form frequency in that corpus."""
    if spec is None:
        spec = pool_spec(entries, source_corpus, num_bins)
    binned = [
        LexEntry(
            lemma=e.lemma, form_sg=e.form_sg, form_pl=e.form_pl, pos=e.pos,
            freq=e.freq, bin=bin_of(e.binning_freq(source_corpus), spec),
            source_corpus=source_corpus, animate=e.animate, gender=e.gender,
            det_sg=e.det_sg, det_pl=e.det_pl,
        )
        for e in entries
    ]
    return binned, spec


@dataclass(frozen=True)
class Lexicon:
    language: str
    sources: tuple[str, ...]
    nouns: tuple[LexEntry, ...]
    verbs: tuple[LexEntry, ...]
    bin_specs: dict[str, BinSpec] = field(default_factory=dict)  # "pos:source" -> spec

    def entries(self, pos: str, source: str) -> list[LexEntry]:
        pool = self.nouns if pos == "noun" else self.verbs
        return [e for e in pool if e.source_corpus == source]


def select_per_bin(candidates: dict[str, list[LexEntry]], picks: dict,
                   num_bins: int = 10) -> Lexicon:
    """Validate a hand-authored picks file against the candidate pools and
    freeze it into a Lexicon.

    `candidates` maps "noun"/"verb" to unbinned candidate entries; `picks`
    is the parsed picks JSON: {language, sources, nouns: [...], verbs:
    [...]} where each pick has lemma, source, and optional bin, gender and
    determiner overrides. Bins with no pick only produce a warning.
    """
    language = picks.get("language", "other")
    sources = tuple(picks["sources"])

    bin_specs: dict[str, BinSpec] = {}
    pools: dict[tuple[str, str], dict[str, LexEntry]] = {}
    for pos in ("noun", "verb"):
        for source in sources:
            binned, spec = assign_bins(candidates[pos], source, num_bins=num_bins)
            bin_specs[f"{pos}:{source}"] = spec
            pools[(pos, source)] = {e.lemma: e for e in binned}

    def resolve(pick: dict, pos: str) -> LexEntry:
        source = pick["source"]
        if source not in sources:
            raise LexiconError(
                f"pick {pick['lemma']!r} names unknown source {source!r}")
        pool = pools[(pos, source)]
        entry = pool.get(pick["lemma"])
        if entry is None:
            raise LexiconError(
                f"pick {pick['lemma']!r} ({pos}, {source}) is not a candidate")
        if "bin" in pick and pick["bin"] != entry.bin:
            raise LexiconError(
                f"pick {pick['lemma']!r} records bin {pick['bin']} but "
                f"bin_of gives {entry.bin}")
        overrides = {
            k: pick[k] for k in ("gender", "det_sg", "det_pl") if k in pick
        }
        if overrides:
            entry = LexEntry(**{**asdict(entry), **overrides})
        return entry

    nouns = tuple(resolve(p, "noun") for p in picks.get("nouns", []))
    verbs = tuple(resolve(p, "verb") for p in picks.get("verbs", []))

    for pos, chosen in (("noun", nouns), ("verb", verbs)):
        for source in sources:
            covered = {e.bin for e in chosen if e.source_corpus == source}
            missing = sorted(set(range(num_bins)) - covered)
            if missing:
                log.warning("%s picks for %s leave bins %s empty",
                            pos, source, missing)

    return Lexicon(language=language, sources=sources, nouns=nouns,
                   verbs=verbs, bin_specs=bin_specs)


# -- serialization ----------------------------------------------------------

def _entry_to_dict(e: LexEntry) -> dict:
    d = {
        "lemma": e.lemma, "form_sg": e.form_sg, "form_pl": e.form_pl,
        "pos": e.pos, "freq": e.freq, "bin": e.bin,
        "source_corpus": e.source_corpus, "animate": e.animate,
    }
    for k in ("gender", "det_sg", "det_pl"):
        v = getattr(e, k)
        if v is not None:
            d[k] = v
    return d


def _entry_from_dict(d: dict) -> LexEntry:
    return LexEntry(
        lemma=d["lemma"], form_sg=d["form_sg"], form_pl=d["form_pl"],
        pos=d["pos"], freq=d.get("freq", {}), bin=d.get("bin", -1),
        source_corpus=d.get("source_corpus", ""),
        animate=d.get("animate", False), gender=d.get("gender"),
        det_sg=d.get("det_sg"), det_pl=d.get("det_pl"),
    )


def save_lexicon(lexicon: Lexicon, path: str | Path,
                 manifest: Optional[dict] = None) -> None:
    payload = {
        "format": LEXICON_FORMAT,
        "language": lexicon.language,
        "sources": list(lexicon.sources),
        "bin_specs": {
            key: {"num_bins": s.num_bins, "f_min": s.f_min, "f_max": s.f_max}
            for key, s in lexicon.bin_specs.items()
        },
        "nouns": [_entry_to_dict(e) for e in lexicon.nouns],
        "verbs": [_entry_to_dict(e) for e in lexicon.verbs],
    }
    if manifest is not None:
        payload["manifest"] = manifest
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, sort_keys=True, indent=1)
        f.write("\n")


def validate_entry(e: LexEntry, bin_specs: dict[str, BinSpec]) -> None:
    if not e.lemma or not e.form_sg or not e.form_pl:
        raise LexiconError(f"entry {e.lemma!r} has empty forms")
    if e.pos not in ("noun", "verb"):
        raise LexiconError(f"entry {e.lemma!r} has bad pos {e.pos!r}")
    spec = bin_specs.get(f"{e.pos}:{e.source_corpus}")
    if spec is not None and e.bin >= 0:
        expected = bin_of(e.binning_freq(e.source_corpus), spec)
        if expected != e.bin:
            raise LexiconError(
                f"entry {e.lemma!r}: recorded bin {e.bin} != computed "
                f"{expected}")


def load_lexicon(path: str | Path) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != LEXICON_FORMAT:
        raise LexiconError(f"unsupported lexicon format in {path}")
    bin_specs = {
        key: BinSpec(num_bins=s["num_bins"], f_min=s["f_min"], f_max=s["f_max"])
        for key, s in payload.get("bin_specs", {}).items()
    }
    lexicon = Lexicon(
        language=payload["language"],
        sources=tuple(payload["sources"]),
        nouns=tuple(_entry_from_dict(d) for d in payload["nouns"]),
        verbs=tuple(_entry_from_dict(d) for d in payload["verbs"]),
        bin_specs=bin_specs,
    )
    for e in lexicon.nouns + lexicon.verbs:
        validate_entry(e, bin_specs)
    return lexicon
