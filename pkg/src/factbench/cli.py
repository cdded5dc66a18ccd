"""Command-line interface.

Outputs are deterministic: same inputs, byte-identical output. Text mode
prints tab-separated key-value lines with floats rounded to two decimals;
JSON mode (--format json) keeps full float precision. Domain errors
(unreadable files, malformed input, cap overruns) exit with status 1 and
a one-line message on stderr; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import facets, gold, ingest, profiling, scoring
from .model import ModelError, Triple, UnknownSentenceError


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _cap(args: argparse.Namespace) -> int:
    if args.cap is not None:
        if args.cap < 1:
            raise ValueError("--cap must be positive")
        return args.cap
    return gold.expansion_cap_from_env()


def _load_gold(path: str) -> gold.GoldCorpus:
    return gold.parse_gold(_read_file(path))


def _load_extractions(path: str, args: argparse.Namespace) -> list:
    raws = ingest.read_extractions(
        _read_file(path), with_confidence=args.with_confidence
    )
    return ingest.to_extractions(raws, nary=args.nary)


def _report_lines(report: scoring.ScoreReport, per_sentence: bool) -> list[str]:
    lines = [
        f"facet\t{report.facet}",
        f"tp\t{report.tp}",
        f"fp\t{report.fp}",
        f"fn\t{report.fn}",
        f"precision\t{_fmt(report.precision)}",
        f"recall\t{_fmt(report.recall)}",
        f"f1\t{_fmt(report.f1)}",
    ]
    if report.multi_cover_extractions:
        lines.append(f"multi_cover_extractions\t{report.multi_cover_extractions}")
    if per_sentence:
        for sid, s in report.per_sentence.items():
            lines.append(
                f"sentence\t{sid}\t{s.tp}\t{s.fp}\t{s.fn}\t"
                f"{_fmt(s.precision)}\t{_fmt(s.recall)}\t{_fmt(s.f1)}"
            )
    return lines


def cmd_score(args: argparse.Namespace) -> int:
    cap = _cap(args)
    corpus = _load_gold(args.gold)
    results = []
    for path in args.extractions:
        es = _load_extractions(path, args)
        removed = 0
        if args.filter_implicit:
            es, dropped = ingest.filter_implicit(es, corpus)
            removed = len(dropped)
        report = facets.score_facet(es, corpus, args.facet, cap=cap)
        results.append((path, report, removed))
    if args.format == "json":
        payload = [
            {"file": path, "filtered_implicit": removed, "report": report.to_dict()}
            for path, report, removed in results
        ]
        _emit(_json_dumps(payload))
    else:
        blocks = []
        for path, report, removed in results:
            lines = [f"file\t{path}"]
            if args.filter_implicit:
                lines.append(f"filtered_implicit\t{removed}")
            lines.extend(_report_lines(report, args.per_sentence))
            blocks.append("\n".join(lines))
        _emit("\n\n".join(blocks) + "\n")
    return 0


def _group_by_sentence(triples: list, ids: Sequence[str]) -> dict[str, list]:
    out: dict[str, list] = {sid: [] for sid in ids}
    for item in triples:
        out[item.sentence_id].append(item)
    return out


def cmd_compare(args: argparse.Namespace) -> int:
    cap = _cap(args)
    corpus = _load_gold(args.gold)
    es = _load_extractions(args.extractions, args)

    token_raws = ingest.read_extractions(_read_file(args.token_gold))
    token_gold = ingest.to_extractions(token_raws, nary=True)
    for t in token_gold:
        if t.sentence_id not in corpus.sentences:
            raise UnknownSentenceError(
                f"token-overlap gold references unknown sentence {t.sentence_id!r}"
            )

    m = scoring.match(es, corpus, cap=cap)
    fact_report = scoring.score(m, corpus)

    deduped = [row for sid in corpus.sentences for row in m.by_sentence[sid]]
    gold_by_sentence = _group_by_sentence(token_gold, tuple(corpus.sentences))
    extr_by_sentence: dict[str, list[scoring.MatchedExtraction]] = {
        sid: m.by_sentence[sid] for sid in corpus.sentences
    }

    per_extraction: dict[tuple, scoring.TokenOverlapScore] = {}
    recalls: list[float] = []
    for sid in corpus.sentences:
        rows = extr_by_sentence[sid]
        golds = [t.triple for t in gold_by_sentence[sid]]
        scores, g_recalls = scoring.token_overlap_assign(
            [row.extraction.triple for row in rows], golds
        )
        for row, s in zip(rows, scores):
            per_extraction[row.extraction.key] = s
        recalls.extend(g_recalls)

    precisions = [per_extraction[row.extraction.key].precision for row in deduped]
    tok_p = sum(precisions) / len(precisions) if precisions else 0.0
    tok_r = sum(recalls) / len(recalls) if recalls else 0.0
    tok_f1 = 2 * tok_p * tok_r / (tok_p + tok_r) if tok_p + tok_r else 0.0

    if args.format == "json":
        payload = {
            "file": args.extractions,
            "fact": fact_report.to_dict(),
            "token": {"precision": tok_p, "recall": tok_r, "f1": tok_f1},
            "delta": {
                "precision": tok_p - fact_report.precision,
                "recall": tok_r - fact_report.recall,
                "f1": tok_f1 - fact_report.f1,
            },
            "extractions": [
                {
                    "sentence_id": row.extraction.sentence_id,
                    "subject": row.extraction.triple.subject.text(),
                    "predicate": row.extraction.triple.predicate.text(),
                    "object": row.extraction.triple.object.text(),
                    "fact_match": row.matched,
                    "token": {
                        "precision": per_extraction[row.extraction.key].precision,
                        "recall": per_extraction[row.extraction.key].recall,
                        "f1": per_extraction[row.extraction.key].f1,
                    },
                }
                for row in deduped
            ],
        }
        _emit(_json_dumps(payload))
    else:
        lines = [f"file\t{args.extractions}"]
        for row in deduped:
            t = row.extraction.triple
            s = per_extraction[row.extraction.key]
            lines.append(
                f"extraction\t{row.extraction.sentence_id}\t{t.subject.text()}\t"
                f"{t.predicate.text()}\t{t.object.text()}\t"
                f"{int(row.matched)}\t{_fmt(s.precision)}\t{_fmt(s.recall)}\t{_fmt(s.f1)}"
            )
        for name, fact_v, tok_v in (
            ("precision", fact_report.precision, tok_p),
            ("recall", fact_report.recall, tok_r),
            ("f1", fact_report.f1, tok_f1),
        ):
            lines.append(f"fact\t{name}\t{_fmt(fact_v)}")
            lines.append(f"token\t{name}\t{_fmt(tok_v)}")
            lines.append(f"delta\t{name}\t{_fmt(tok_v - fact_v)}")
        _emit("\n".join(lines) + "\n")
    return 0


def cmd_expand(args: argparse.Namespace) -> int:
    cap = _cap(args)
    corpus = _load_gold(args.gold)
    rows = []
    for syn in corpus.synsets:
        if args.minimal:
            triples: set[Triple] = set()
            for pattern in syn.patterns:
                triples |= gold.minimal_forms(pattern, cap)
        else:
            triples = set()
            for i, pattern in enumerate(syn.patterns):
                triples |= gold.expand(
                    pattern, cap, context=f"synset {syn.id}, pattern {i + 1}"
                )
        rows.append((syn, sorted(triples, key=lambda t: t.key)))
    if args.format == "json":
        payload = {
            "synsets": [
                {
                    "id": syn.id,
                    "sentence_id": syn.sentence_id,
                    "triples": [
                        [t.subject.text(), t.predicate.text(), t.object.text()]
                        for t in triples
                    ],
                }
                for syn, triples in rows
            ]
        }
        _emit(_json_dumps(payload))
    else:
        lines = []
        for syn, triples in rows:
            for t in triples:
                lines.append(
                    f"{syn.sentence_id}\t{syn.id}\t{t.subject.text()}\t"
                    f"{t.predicate.text()}\t{t.object.text()}"
                )
        _emit("\n".join(lines) + ("\n" if lines else ""))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cap = _cap(args)
    corpus = _load_gold(args.gold)
    issues = gold.validate_corpus(corpus, cap)
    if args.format == "json":
        payload = [
            {"kind": i.kind, "synset_id": i.synset_id, "message": i.message}
            for i in issues
        ]
        _emit(_json_dumps(payload))
    else:
        if not issues:
            _emit("ok\n")
        else:
            lines = [f"{i.kind}\t{i.synset_id}\t{i.message}" for i in issues]
            _emit("\n".join(lines) + "\n")
    return 1 if issues else 0


def cmd_iaa(args: argparse.Namespace) -> int:
    cap = _cap(args)
    a = _load_gold(args.gold_a)
    b = _load_gold(args.gold_b)
    value = scoring.iaa(a, b, cap)
    if args.format == "json":
        _emit(_json_dumps({"iaa": value}))
    else:
        _emit(f"iaa\t{_fmt(value)}\n")
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    cap = _cap(args)
    corpus = _load_gold(args.gold)
    es = _load_extractions(args.extractions, args)
    want_sentences = args.by is not None
    if want_sentences and not args.tagged:
        raise ValueError("--by needs --tagged with the tagged sentences")

    errors = profiling.bucketize_errors(es, corpus, cap=cap)
    buckets = None
    if want_sentences:
        tagged = ingest.read_tagged(_read_file(args.tagged))
        buckets = profiling.bucketize_sentences(
            tagged,
            args.by,
            corpus,
            es,
            case_boundaries=tuple(args.case_boundaries),
            cap=cap,
        )

    if args.format == "json":
        payload: dict = {"errors": errors.to_dict()}
        if buckets is not None:
            payload["sentences"] = buckets.to_dict()
        _emit(_json_dumps(payload))
    else:
        lines = [f"incorrect\t{errors.incorrect}"]
        for sig in profiling.ERROR_SIGNATURES:
            lines.append(f"bucket\t{sig.label()}\t{errors.counts[sig]}")
        for name, frac in zip(
            ("subject", "predicate", "object"), errors.slot_error_fractions
        ):
            lines.append(f"slot_error_fraction\t{name}\t{_fmt(frac)}")
        if errors.no_errors:
            lines.append("no_errors\ttrue")
        if buckets is not None:
            lines.append(f"scheme\t{buckets.scheme}")
            for label in buckets.labels:
                r = buckets.reports[label]
                lines.append(
                    f"sentence_bucket\t{label}\t{len(buckets.sentences[label])}\t"
                    f"{r.tp}\t{r.fp}\t{r.fn}\t"
                    f"{_fmt(r.precision)}\t{_fmt(r.recall)}\t{_fmt(r.f1)}"
                )
        _emit("\n".join(lines) + "\n")
    return 0


def cmd_naive(args: argparse.Namespace) -> int:
    tagged = ingest.read_tagged(_read_file(args.tagged))
    verb_tags = frozenset(
        t.strip() for t in args.verb_tags.split(",") if t.strip()
    )
    if not verb_tags:
        raise ValueError("--verb-tags must name at least one tag")
    lines = []
    for t in tagged:
        for e in ingest.naive_extract(t, verb_tags):
            tr = e.triple
            lines.append(
                f"{e.sentence_id}\t{tr.subject.text()}\t"
                f"{tr.predicate.text()}\t{tr.object.text()}"
            )
    _emit("\n".join(lines) + ("\n" if lines else ""))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--cap",
        type=int,
        default=None,
        help=f"per-pattern expansion cap (default: ${gold.ENV_EXPANSION_CAP} "
        f"or {gold.DEFAULT_EXPANSION_CAP})",
    )
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output format (default: text)",
    )


def _add_extraction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--with-confidence",
        action="store_true",
        help="treat the last TSV column as a confidence score",
    )
    p.add_argument(
        "--nary",
        action="store_true",
        help="collapse slots beyond the third into the object",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factbench",
        description="Fact-level evaluation for Open Information Extraction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score extractions against a gold corpus")
    p.add_argument("gold", help="gold corpus file")
    p.add_argument("extractions", nargs="+", help="extraction TSV file(s)")
    p.add_argument("--facet", choices=facets.FACETS, default="default")
    p.add_argument(
        "--filter-implicit",
        action="store_true",
        help="drop extractions whose tokens are not all from the sentence",
    )
    p.add_argument(
        "--per-sentence", action="store_true", help="include per-sentence rows"
    )
    _add_extraction_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser(
        "compare", help="fact-level vs token-overlap scores, side by side"
    )
    p.add_argument("gold", help="gold corpus file")
    p.add_argument("extractions", help="extraction TSV file")
    p.add_argument(
        "--token-gold",
        required=True,
        help="flat gold triples (extraction TSV format) for token overlap",
    )
    _add_extraction_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("expand", help="print every triple a gold corpus licenses")
    p.add_argument("gold", help="gold corpus file")
    p.add_argument(
        "--minimal",
        action="store_true",
        help="only minimal forms (all optional groups absent)",
    )
    _add_common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("validate", help="check a gold corpus for hygiene issues")
    p.add_argument("gold", help="gold corpus file")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("iaa", help="inter-annotator agreement of two gold files")
    p.add_argument("gold_a", help="first annotator's gold file")
    p.add_argument("gold_b", help="second annotator's gold file")
    _add_common(p)
    p.set_defaults(func=cmd_iaa)

    p = sub.add_parser("profile", help="error buckets and sentence-feature buckets")
    p.add_argument("gold", help="gold corpus file")
    p.add_argument("extractions", help="extraction TSV file")
    p.add_argument(
        "--by",
        choices=profiling.SENTENCE_SCHEMES,
        default=None,
        help="also bucket sentences by this feature",
    )
    p.add_argument("--tagged", help="tagged sentences file (needed with --by)")
    p.add_argument(
        "--case-boundaries",
        nargs=2,
        type=int,
        default=(1, 3),
        metavar=("LOW", "HIGH"),
        help="bucket boundaries for the case scheme (default: 1 3)",
    )
    _add_extraction_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("naive", help="verb-pivot baseline over tagged sentences")
    p.add_argument("tagged", help="tagged sentences file")
    p.add_argument(
        "--verb-tags",
        default="VERB",
        help="comma-separated tags treated as verbs (default: VERB)",
    )
    p.set_defaults(func=cmd_naive)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--data-dir", required=True, help="directory for session files")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ModelError,
        UnknownSentenceError,
        gold.GoldParseError,
        gold.ExpansionCapError,
        ingest.ExtractionParseError,
        ingest.TaggedParseError,
        scoring.ScoringError,
        profiling.ProfilingError,
        ValueError,
        OSError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
