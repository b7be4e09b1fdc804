"""Command-line entry point: every stage as a subcommand, plus `pipeline`
to chain them end to end.

Exit codes: 0 success, 2 usage errors (from argparse), 1 runtime errors
with a machine-readable JSON object on stderr naming the failed stage.
All stages are deterministic; `--jobs` only bounds worker parallelism for
pair scoring and never changes outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from . import analysis, benchgen, bpe, corpus, lexicon, manifest, ngram, scoring

BUILTIN_LANGUAGES = ("en", "fr", "de")


def _write_json(payload: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, sort_keys=True, indent=1)
        f.write("\n")


def _builtin_path(language: str, name: str):
    if language not in BUILTIN_LANGUAGES:
        raise ValueError(
            f"no shipped lexicon for language {language!r}; supply "
            f"--lexicon/--aux files")
    return resources.files("fitclams").joinpath("data").joinpath(language).joinpath(name)


# -- subcommands -------------------------------------------------------------

def cmd_stats(args) -> int:
    c = corpus.load_corpus(args.corpus, case=args.case, corpus_id=args.id)
    st = corpus.compute_stats(c, punctuation_policy=args.punctuation)
    payload = st.to_json_dict()
    if args.freqs_out:
        corpus.write_frequencies_tsv(corpus.word_frequencies(c), args.freqs_out)
    if args.out:
        payload["manifest"] = manifest.build_manifest(
            "stats", {"case": args.case, "punctuation": args.punctuation},
            {"corpus": args.corpus})
        _write_json(payload, args.out)
    else:
        json.dump(payload, sys.stdout, ensure_ascii=False, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def cmd_train_tokenizer(args) -> int:
    c = corpus.load_corpus(args.corpus, case=args.case)
    model = bpe.train_bpe(c, vocab_size=args.vocab_size)
    bpe.save_model(model, args.out, manifest=manifest.build_manifest(
        "train-tokenizer", {"vocab_size": args.vocab_size, "case": args.case},
        {"corpus": args.corpus}))
    return 0


def cmd_train_ngram(args) -> int:
    c = corpus.load_corpus(args.corpus, case=args.case)
    tok = bpe.load_model(args.tokenizer)
    model = ngram.train_ngram(c, tok, order=args.order, discount=args.discount)
    ngram.save_ngram(model, args.out, manifest=manifest.build_manifest(
        "train-ngram",
        {"order": args.order, "discount": args.discount, "case": args.case},
        {"corpus": args.corpus, "tokenizer": args.tokenizer}))
    return 0


def cmd_build_lexicon(args) -> int:
    corpus_a = corpus.load_corpus(args.corpus_a, case=args.case, corpus_id=args.id_a)
    corpus_b = corpus.load_corpus(args.corpus_b, case=args.case, corpus_id=args.id_b)
    shared = lexicon.shared_vocabulary(corpus_a, corpus_b)
    freq_tables = {
        corpus_a.id: corpus.word_frequencies(corpus_a),
        corpus_b.id: corpus.word_frequencies(corpus_b),
    }
    with open(args.allowlist, encoding="utf-8") as f:
        allowlist = frozenset(line.strip() for line in f if line.strip())
    with open(args.picks, encoding="utf-8") as f:
        picks = json.load(f)

    candidates = {}
    for pos in ("noun", "verb"):
        tokens = lexicon.read_annotations(args.annotations)
        candidates[pos] = lexicon.filter_candidates(
            tokens, pos, allowlist, shared, freq_tables,
            language=picks.get("language", "en"))
    lex = lexicon.select_per_bin(candidates, picks, num_bins=args.bins)

    if args.aux:
        aux = benchgen.load_aux(args.aux)
        missing = sorted(
            form
            for o in aux.object_nouns
            for form in (o.entry.form_sg, o.entry.form_pl)
            if form not in shared
        ) + sorted(
            form
            for pair in aux.rel_verbs
            for form in pair
            if form not in shared
        )
        if missing:
            raise lexicon.LexiconError(
                f"aux forms not in the shared vocabulary: {missing}")

    inputs = {
        "corpus_a": args.corpus_a, "corpus_b": args.corpus_b,
        "annotations": args.annotations, "allowlist": args.allowlist,
        "picks": args.picks,
    }
    if args.aux:
        inputs["aux"] = args.aux
    lexicon.save_lexicon(lex, args.out, manifest=manifest.build_manifest(
        "build-lexicon", {"bins": args.bins, "case": args.case}, inputs))
    return 0


def cmd_gen_benchmark(args) -> int:
    if args.lexicon and args.aux:
        lex = lexicon.load_lexicon(args.lexicon)
        aux = benchgen.load_aux(args.aux)
        inputs = {"lexicon": args.lexicon, "aux": args.aux}
    elif args.language:
        with resources.as_file(_builtin_path(args.language, "lexicon.json")) as p:
            lex = lexicon.load_lexicon(p)
        with resources.as_file(_builtin_path(args.language, "aux.json")) as p:
            aux = benchgen.load_aux(p)
        inputs = {}
    else:
        raise ValueError(
            "supply --lexicon and --aux, or --language for a shipped lexicon")
    paradigms = (tuple(args.paradigms.split(","))
                 if args.paradigms else benchgen.PARADIGMS)
    sources = args.source or None
    pairs = benchgen.generate(lex, aux, paradigms=paradigms,
                              language=args.language, sources=sources)
    for p in pairs:
        benchgen.validate_pair(p)
    benchgen.emit_benchmark(pairs, args.out, manifest=manifest.build_manifest(
        "gen-benchmark",
        {"language": args.language or lex.language,
         "paradigms": list(paradigms),
         "sources": sources or list(lex.sources)},
        inputs))
    return 0


def cmd_score(args) -> int:
    pairs = benchgen.read_benchmark(args.benchmark)
    if args.validate_only:
        if not args.scores:
            raise ValueError("--validate-only needs --scores")
        records = scoring.read_score_records(args.scores)
        problems = scoring.validate_score_records(
            records, pairs, bow_marker=args.bow_marker)
        for p in problems:
            print(p, file=sys.stderr)
        print(json.dumps({"records": len(records), "pairs": len(pairs),
                          "problems": len(problems)}))
        return 1 if problems else 0

    if not args.out:
        raise ValueError("--out is required unless --validate-only is given")
    inputs = {"benchmark": args.benchmark}
    if args.ngram:
        model = ngram.load_ngram(args.ngram)
        results = scoring.score_pairs(pairs, model, region=args.region,
                                      mode=args.mode, jobs=args.jobs)
        inputs["ngram"] = args.ngram
    elif args.scores:
        records = scoring.read_score_records(args.scores)
        results = scoring.score_pairs(pairs, records, region=args.region,
                                      mode=args.mode)
        inputs["scores"] = args.scores
    else:
        raise ValueError("supply --ngram or --scores")
    scoring.write_results(results, args.out, manifest=manifest.build_manifest(
        "score", {"region": args.region, "mode": args.mode}, inputs))
    return 0


def cmd_evaluate(args) -> int:
    paths = [p for group in args.results for p in group.split(",") if p]
    seed_results = [scoring.read_results(p) for p in paths]
    report = scoring.aggregate(seed_results)
    report["manifest"] = manifest.build_manifest(
        "evaluate", {"n_seeds": len(paths)},
        {f"results_{i}": p for i, p in enumerate(paths)})
    _write_json(report, args.out)
    return 0


def cmd_regress(args) -> int:
    results = scoring.read_results(args.results)
    pairs = benchgen.read_benchmark(args.benchmark)
    freqs = corpus.read_frequencies_tsv(args.freqs)
    rows = analysis.build_rows(results, pairs, freqs, paradigm=args.paradigm)
    fit = analysis.fit_ols(rows)
    payload = fit.to_json_dict()
    payload["paradigm"] = args.paradigm
    payload["manifest"] = manifest.build_manifest(
        "regress", {"paradigm": args.paradigm},
        {"results": args.results, "benchmark": args.benchmark,
         "freqs": args.freqs})
    _write_json(payload, args.out)
    return 0


def cmd_correlate(args) -> int:
    fit_paths = [p for group in args.fits for p in group.split(",") if p]
    report_paths = [p for group in args.reports for p in group.split(",") if p]
    if len(fit_paths) != len(report_paths):
        raise ValueError(
            f"{len(fit_paths)} fits but {len(report_paths)} reports")
    points = []
    for fp, rp in zip(fit_paths, report_paths):
        with open(fp, encoding="utf-8") as f:
            fit = json.load(f)
        with open(rp, encoding="utf-8") as f:
            report = json.load(f)
        points.append((fit["r2"], report["overall"]))
    corr = analysis.correlate_r2_accuracy(points)
    payload = corr.to_json_dict()
    inputs = {f"fit_{i}": p for i, p in enumerate(fit_paths)}
    inputs.update({f"report_{i}": p for i, p in enumerate(report_paths)})
    payload["manifest"] = manifest.build_manifest("correlate", {}, inputs)
    _write_json(payload, args.out)
    return 0


# -- pipeline ----------------------------------------------------------------

def cmd_pipeline(args) -> int:
    with open(args.config, encoding="utf-8") as f:
        cfg = json.load(f)
    base = Path(args.config).resolve().parent

    def path_of(value) -> Path:
        p = Path(value)
        return p if p.is_absolute() else base / p

    out_dir = Path(args.out_dir) if args.out_dir else path_of(cfg.get("out_dir", "out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    case = cfg.get("case", "lower")
    jobs = args.jobs

    corpora = {}
    for key in ("corpus_a", "corpus_b"):
        spec = cfg[key]
        corpora[spec["id"]] = corpus.load_corpus(
            path_of(spec["path"]), case=case, corpus_id=spec["id"],
            language=cfg.get("language", "other"))
    corpus_ids = list(corpora)

    artifacts = []

    # Descriptive statistics and frequency tables.
    freq_tables = {}
    for cid, c in corpora.items():
        st = corpus.compute_stats(c, punctuation_policy=cfg.get("punctuation", "exclude"))
        payload = st.to_json_dict()
        payload["manifest"] = manifest.build_manifest(
            "stats", {"case": case, "corpus_id": cid},
            {"corpus": path_of(cfg["corpus_a" if cid == corpus_ids[0] else "corpus_b"]["path"])})
        stats_path = out_dir / f"stats_{cid}.json"
        _write_json(payload, stats_path)
        freq_tables[cid] = corpus.word_frequencies(c)
        freqs_path = out_dir / f"freqs_{cid}.tsv"
        corpus.write_frequencies_tsv(freq_tables[cid], freqs_path)
        _write_json(manifest.build_manifest(
            "word-frequencies", {"corpus_id": cid}, {}),
            freqs_path.with_suffix(".tsv.manifest.json"))
        artifacts.extend([str(stats_path), str(freqs_path)])

    # Tokenizers and n-gram models, one per training corpus.
    models = {}
    for cid, c in corpora.items():
        tok = bpe.train_bpe(c, vocab_size=cfg.get("tokenizer", {}).get("vocab_size", 512))
        tok_path = out_dir / f"tokenizer_{cid}.json"
        bpe.save_model(tok, tok_path, manifest=manifest.build_manifest(
            "train-tokenizer",
            {"vocab_size": tok.vocab_size, "corpus_id": cid}, {}))
        lm = ngram.train_ngram(
            c, tok, order=cfg.get("ngram", {}).get("order", 3),
            discount=cfg.get("ngram", {}).get("discount", 0.75))
        lm_path = out_dir / f"lm_{cid}.bin"
        ngram.save_ngram(lm, lm_path, manifest=manifest.build_manifest(
            "train-ngram", {"order": lm.order, "discount": lm.discount,
                            "corpus_id": cid},
            {"tokenizer": tok_path}))
        models[cid] = lm
        artifacts.extend([str(tok_path), str(lm_path)])

    # Lexicon from annotations, allowlist, and picks.
    shared = lexicon.shared_vocabulary(*corpora.values())
    with open(path_of(cfg["allowlist"]), encoding="utf-8") as f:
        allowlist = frozenset(line.strip() for line in f if line.strip())
    with open(path_of(cfg["picks"]), encoding="utf-8") as f:
        picks = json.load(f)
    candidates = {}
    for pos in ("noun", "verb"):
        tokens = lexicon.read_annotations(path_of(cfg["annotations"]))
        candidates[pos] = lexicon.filter_candidates(
            tokens, pos, allowlist, shared, freq_tables,
            language=cfg.get("language", "en"))
    lex = lexicon.select_per_bin(candidates, picks, num_bins=cfg.get("bins", 10))
    lex_path = out_dir / "lexicon.json"
    lexicon.save_lexicon(lex, lex_path, manifest=manifest.build_manifest(
        "build-lexicon", {"bins": cfg.get("bins", 10)},
        {"annotations": path_of(cfg["annotations"]),
         "allowlist": path_of(cfg["allowlist"]),
         "picks": path_of(cfg["picks"])}))
    artifacts.append(str(lex_path))

    aux = benchgen.load_aux(path_of(cfg["aux"]))

    # One benchmark per lexical source.
    paradigms = tuple(cfg.get("paradigms", benchgen.PARADIGMS))
    benchmarks = {}
    for source in lex.sources:
        pairs = benchgen.generate(lex, aux, paradigms=paradigms, sources=[source])
        for p in pairs:
            benchgen.validate_pair(p)
        bench_path = out_dir / f"benchmark_{source}.jsonl"
        benchgen.emit_benchmark(pairs, bench_path, manifest=manifest.build_manifest(
            "gen-benchmark", {"source": source, "paradigms": list(paradigms)},
            {"lexicon": lex_path, "aux": path_of(cfg["aux"])}))
        benchmarks[source] = pairs
        artifacts.append(str(bench_path))

    # Score every model on every benchmark at the critical region.
    region = cfg.get("scoring", {}).get("region", "critical")
    results = {}
    for cid, lm in models.items():
        for source, pairs in benchmarks.items():
            res = scoring.score_pairs(pairs, lm, region=region, jobs=jobs)
            res_path = out_dir / f"results_{cid}_on_{source}.jsonl"
            scoring.write_results(res, res_path, manifest=manifest.build_manifest(
                "score", {"region": region, "model": cid, "benchmark": source},
                {"benchmark": out_dir / f"benchmark_{source}.jsonl"}))
            results[(cid, source)] = res
            artifacts.append(str(res_path))

    # Evaluation reports per (model, benchmark source).
    reports = {}
    for (cid, source), res in results.items():
        report = scoring.aggregate([res])
        report["model"] = cid
        report["eval_source"] = source
        report["manifest"] = manifest.build_manifest(
            "evaluate", {"model": cid, "eval_source": source},
            {"results": out_dir / f"results_{cid}_on_{source}.jsonl"})
        report_path = out_dir / f"report_{cid}_on_{source}.json"
        _write_json(report, report_path)
        reports[(cid, source)] = report
        artifacts.append(str(report_path))

    # Regression per model; rows pool both lexical sources unless told not to.
    pooling = cfg.get("regression", {}).get("pooling", "pooled")
    fits = {}
    for cid in corpus_ids:
        if pooling == "pooled":
            groups = {"pooled": [s for s in lex.sources]}
        else:
            groups = {s: [s] for s in lex.sources}
        for label, sources in groups.items():
            rows = []
            for source in sources:
                rows.extend(analysis.build_rows(
                    results[(cid, source)], benchmarks[source],
                    freq_tables[cid]))
            fit = analysis.fit_ols(rows)
            payload = fit.to_json_dict()
            payload["model"] = cid
            payload["pooling"] = label
            payload["manifest"] = manifest.build_manifest(
                "regress", {"model": cid, "pooling": label, "paradigm":
                            "simple_agreement"},
                {"freqs": out_dir / f"freqs_{cid}.tsv"})
            suffix = "" if pooling == "pooled" else f"_{label}"
            fit_path = out_dir / f"fit_{cid}{suffix}.json"
            _write_json(payload, fit_path)
            fits[(cid, label)] = payload
            artifacts.append(str(fit_path))

    # Correlation between regression fit and accuracy across configurations.
    points = []
    for (cid, label), fit in fits.items():
        for source in lex.sources:
            points.append((fit["r2"], reports[(cid, source)]["overall"]))
    corr = analysis.correlate_r2_accuracy(points)
    corr_payload = corr.to_json_dict()
    corr_payload["manifest"] = manifest.build_manifest(
        "correlate", {"n_points": len(points)}, {})
    corr_path = out_dir / "correlation.json"
    _write_json(corr_payload, corr_path)
    artifacts.append(str(corr_path))

    json.dump({"out_dir": str(out_dir), "artifacts": artifacts},
              sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fitclams",
        description="Frequency-controlled agreement benchmarks: build, "
                    "score, analyze.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="descriptive corpus statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--id", default=None)
    p.add_argument("--case", choices=("lower", "preserve"), default="lower")
    p.add_argument("--punctuation", choices=("include", "exclude"),
                   default="exclude")
    p.add_argument("--freqs-out", default=None,
                   help="also write a form\\tcount frequency TSV")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train-tokenizer", help="train the BPE tokenizer")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vocab-size", type=int, default=bpe.DEFAULT_VOCAB_SIZE)
    p.add_argument("--case", choices=("lower", "preserve"), default="lower")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_tokenizer)

    p = sub.add_parser("train-ngram", help="train the n-gram scorer")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tokenizer", required=True)
    p.add_argument("--order", type=int, default=ngram.DEFAULT_ORDER)
    p.add_argument("--discount", type=float, default=ngram.DEFAULT_DISCOUNT)
    p.add_argument("--case", choices=("lower", "preserve"), default="lower")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_ngram)

    p = sub.add_parser("build-lexicon", help="shared vocabulary, filtering, "
                       "binning, and pick validation")
    p.add_argument("--corpus-a", required=True)
    p.add_argument("--corpus-b", required=True)
    p.add_argument("--id-a", default=None)
    p.add_argument("--id-b", default=None)
    p.add_argument("--annotations", required=True)
    p.add_argument("--allowlist", required=True)
    p.add_argument("--picks", required=True)
    p.add_argument("--aux", default=None,
                   help="validate this aux lexicon against the shared vocabulary")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--case", choices=("lower", "preserve"), default="lower")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_lexicon)

    p = sub.add_parser("gen-benchmark", help="generate minimal pairs")
    p.add_argument("--lexicon", default=None)
    p.add_argument("--aux", default=None)
    p.add_argument("--language", default=None,
                   help="use the shipped lexicon for en, fr, or de")
    p.add_argument("--source", action="append", default=None,
                   help="restrict to one lexical source (repeatable)")
    p.add_argument("--paradigms", default=None, help="comma-separated subset")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_benchmark)

    p = sub.add_parser("score", help="score pairs with the n-gram model or "
                       "an exported score file")
    p.add_argument("--benchmark", required=True)
    p.add_argument("--ngram", default=None)
    p.add_argument("--scores", default=None)
    p.add_argument("--region", choices=scoring.REGIONS, default="critical")
    p.add_argument("--mode", choices=scoring.MODES, default="causal")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bow-marker", default="▁")
    p.add_argument("--validate-only", action="store_true",
                   help="only check the score file against the benchmark")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="aggregate per-seed results")
    p.add_argument("--results", action="append", required=True,
                   help="results JSONL files, comma-separated or repeated")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("regress", help="frequency regression on score differences")
    p.add_argument("--results", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--freqs", required=True)
    p.add_argument("--paradigm", default="simple_agreement")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("correlate", help="correlate regression fit with accuracy")
    p.add_argument("--fits", action="append", required=True)
    p.add_argument("--reports", action="append", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("pipeline", help="run every stage from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surfaced as machine-readable stage errors
        json.dump({"stage": args.command, "error": str(exc),
                   "type": type(exc).__name__}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
