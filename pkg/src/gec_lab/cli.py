"""Command-line front end: ``gec-lab <subcommand> ...``.

Exit status is 0 on success, 1 when an input fails validation and 2 on a
usage error. Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gec_lab import corpus_io
from gec_lab.alignment import extract_edits
from gec_lab.baselines import SpellCorrector, identity_correct
from gec_lab.errors import ValidationError
from gec_lab.error_types import TypeLexicons, classify_edit, render_type_table, score_by_type
from gec_lab.gleu import gleu_corpus
from gec_lab.m2_scorer import score_m2_document
from gec_lab.noising import DenoiseConfig, NoiseConfig, bart_denoise, noise_config_from_file, noise_sentence
from gec_lab.report import aggregate_runs, f_key, load_run, render_summary
from gec_lab.rng import stream
from gec_lab.subword import BpeModel, bpe_apply, bpe_learn, bpe_restore, count_words


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _log(args, msg: str) -> None:
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


def _read_sentences(path) -> list[list[str]]:
    return list(corpus_io.read_lines(path))


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def _score_params(args) -> dict:
    return {"hyp": args.hyp, "gold": args.gold, "max_unchanged": args.max_unchanged}


def cmd_m2(args) -> int:
    doc = corpus_io.read_m2(args.gold)
    hyps = _read_sentences(args.hyp)
    report = score_m2_document(doc, hyps, args.beta, args.max_unchanged)
    print(f"P\tR\t{f_key(args.beta)}")
    print(f"{100 * report.precision:.2f}\t{100 * report.recall:.2f}\t{100 * report.f_beta:.2f}")
    if args.json:
        _write_json(args.json, report.to_json(args.run_id, "m2", _score_params(args)))
    return 0


def cmd_errant_lite(args) -> int:
    doc = corpus_io.read_m2(args.gold)
    hyps = _read_sentences(args.hyp)
    if len(hyps) != len(doc.entries):
        raise ValidationError(f"{len(hyps)} hypotheses for {len(doc.entries)} gold entries")
    lexicons = TypeLexicons.from_dir(args.lexicons)
    entries = [(e.source, h, e.annotations) for e, h in zip(doc.entries, hyps)]
    report = score_by_type(entries, lexicons, args.beta, args.max_unchanged)
    exclude = () if args.include_other else ("OTHER",)
    sys.stdout.write(render_type_table(report, None if args.top <= 0 else args.top, exclude, args.decimals))
    if args.json:
        _write_json(args.json, report.to_json(args.run_id, "errant-lite", _score_params(args)))
    return 0


def cmd_gleu(args) -> int:
    if len(args.ref) > 1 and args.seed is None:
        raise _UsageError("--seed is required when sampling among several --ref files")
    sources = _read_sentences(args.src)
    hyps = _read_sentences(args.hyp)
    ref_files = [_read_sentences(r) for r in args.ref]
    for path, refs in zip(args.ref, ref_files):
        if len(refs) != len(sources):
            raise ValidationError(f"{path} has {len(refs)} lines, source has {len(sources)}")
    ref_sets = [list(rs) for rs in zip(*ref_files)]
    score = gleu_corpus(sources, hyps, ref_sets, args.n, args.iter, args.seed or 0)
    print(f"{score:.4f}")
    if args.json:
        _write_json(args.json, {"run_id": args.run_id, "metric": "gleu", "score": score,
                                "params": {"n": str(args.n), "iter": str(args.iter), "seed": str(args.seed)}})
    return 0


def cmd_extract(args) -> int:
    lexicons = TypeLexicons.from_dir(args.lexicons) if args.lexicons else None
    doc = corpus_io.M2Document()
    for src, tgt in corpus_io.read_parallel(args.src, args.tgt):
        edits = extract_edits(src, tgt)
        if lexicons is not None:
            edits = [type(e)(e.start, e.end, e.replacement, classify_edit(e, src, lexicons)) for e in edits]
        doc.entries.append(corpus_io.entry_from_edits(src, edits))
    text = corpus_io.emit_m2(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n", buffering=1 << 20)


def cmd_noise(args) -> int:
    config = noise_config_from_file(args.config, args.seed) if args.config else NoiseConfig(seed=args.seed)
    n = 0
    with open(args.input, encoding="utf-8") as fin, _open_out(args.out_src) as fsrc, _open_out(args.out_tgt) as ftgt:
        lineno = 0
        try:
            for lineno, line in enumerate(fin, 1):
                tokens = line.split()
                noised = noise_sentence(tokens, config, stream(args.seed, lineno - 1))
                fsrc.write(" ".join(noised) + "\n")
                ftgt.write(" ".join(tokens) + "\n")
                n += 1
        except (OSError, UnicodeDecodeError) as exc:
            raise ValidationError(f"{args.input}: line {lineno + 1}: {exc}") from exc
    _log(args, f"noised {n} lines")
    return 0


def _documents(path):
    doc: list[list[str]] = []
    for tokens in corpus_io.read_lines(path):
        if tokens:
            doc.append(tokens)
        elif doc:
            yield doc
            doc = []
    if doc:
        yield doc


def cmd_denoise(args) -> int:
    config = DenoiseConfig(args.mask_ratio, args.span_lambda, args.shuffle, args.mask_token, args.seed)
    n = 0
    with _open_out(args.out_src) as fsrc, _open_out(args.out_tgt) as ftgt:
        for k, doc in enumerate(_documents(args.input)):
            noised, original = bart_denoise(doc, config, stream(args.seed, "denoise", k))
            fsrc.write(" ".join(noised) + "\n")
            ftgt.write(" ".join(original) + "\n")
            n += 1
    _log(args, f"denoised {n} documents")
    return 0


def cmd_bpe_learn(args) -> int:
    model = bpe_learn(count_words(corpus_io.read_lines(args.input)), args.merges)
    model.save(args.model)
    _log(args, f"learned {len(model.merges)} merges")
    return 0


def cmd_bpe_apply(args) -> int:
    model = BpeModel.load(args.model, args.marker)
    corpus_io.write_lines((bpe_apply(model, s) for s in corpus_io.read_lines(args.input)), args.output)
    return 0


def cmd_bpe_restore(args) -> int:
    corpus_io.write_lines((bpe_restore(s, args.marker) for s in corpus_io.read_lines(args.input)), args.output)
    return 0


def cmd_correct(args) -> int:
    if args.method == "identity":
        fix = identity_correct
    else:
        if not args.vocab:
            raise _UsageError("--vocab is required for --method spell")
        vocab = Path(args.vocab).read_text(encoding="utf-8").split()
        fix = SpellCorrector(vocab, args.max_distance)
    n = corpus_io.write_lines((fix(s) for s in corpus_io.read_lines(args.input)), args.output)
    _log(args, f"corrected {n} sentences")
    return 0


def cmd_filter(args) -> int:
    kept = corpus_io.filter_unchanged(corpus_io.read_parallel(args.src, args.tgt))
    if args.lang:
        sides = {"source": (True, False), "target": (False, True), "both": (True, True)}[args.tag_side]

        def tag(s, on):
            return corpus_io.tag_language(s, args.lang, args.tag_position) if on else s

        kept = [(tag(s, sides[0]), tag(t, sides[1])) for s, t in kept]
    corpus_io.write_lines((s for s, _ in kept), args.out_src)
    corpus_io.write_lines((t for _, t in kept), args.out_tgt)
    _log(args, f"kept {len(kept)} changed pairs")
    return 0


def cmd_report(args) -> int:
    runs = [load_run(p) for p in args.runs]
    summary = aggregate_runs(runs, pooled=args.pooled)
    sys.stdout.write(render_summary(runs, summary, args.markdown, args.decimals))
    return 0


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gec-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def scoring_opts(p):
        p.add_argument("--hyp", required=True, help="hypothesis file, one tokenized sentence per line")
        p.add_argument("--gold", required=True, help="gold M2 file")
        p.add_argument("--beta", type=float, default=0.5)
        p.add_argument("--max-unchanged", type=int, default=2)
        p.add_argument("--json", help="write a run report here")
        p.add_argument("--run-id", default="run")

    p = sub.add_parser("m2", help="MaxMatch P/R/F")
    scoring_opts(p)
    p.set_defaults(func=cmd_m2)

    p = sub.add_parser("errant-lite", help="per-error-type P/R/F table")
    scoring_opts(p)
    p.add_argument("--lexicons", required=True, help="directory with determiners.txt, prepositions.txt, vocab.txt")
    p.add_argument("--top", type=int, default=5, help="rows to show; 0 for all")
    p.add_argument("--include-other", action="store_true")
    p.add_argument("--decimals", type=int, default=1)
    p.set_defaults(func=cmd_errant_lite)

    p = sub.add_parser("gleu", help="GLEU with reference sampling")
    p.add_argument("--src", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True, action="append")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--iter", type=int, default=500)
    p.add_argument("--seed", type=int)
    p.add_argument("--json")
    p.add_argument("--run-id", default="run")
    p.set_defaults(func=cmd_gleu)

    p = sub.add_parser("extract", help="align parallel text into M2 edits")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out")
    p.add_argument("--lexicons")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("noise", help="pseudo-error corpus from clean text")
    p.add_argument("--input", required=True)
    p.add_argument("--out-src", required=True)
    p.add_argument("--out-tgt", required=True)
    p.add_argument("--config")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", help="span-masked / shuffled denoising pairs")
    p.add_argument("--input", required=True, help="sentences per line, documents separated by blank lines")
    p.add_argument("--out-src", required=True)
    p.add_argument("--out-tgt", required=True)
    p.add_argument("--mask-ratio", type=float, default=0.3)
    p.add_argument("--lambda", dest="span_lambda", type=float, default=3.0)
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--mask-token", default="<mask>")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("bpe-learn")
    p.add_argument("--input", required=True)
    p.add_argument("--merges", type=int, required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_bpe_learn)

    for name, func in (("bpe-apply", cmd_bpe_apply), ("bpe-restore", cmd_bpe_restore)):
        p = sub.add_parser(name)
        if name == "bpe-apply":
            p.add_argument("--model", required=True)
        p.add_argument("--input", required=True)
        p.add_argument("--output", required=True)
        p.add_argument("--marker", default="@@")
        p.set_defaults(func=func)

    p = sub.add_parser("correct", help="baseline correctors")
    p.add_argument("--method", choices=("identity", "spell"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--vocab")
    p.add_argument("--max-distance", type=int, default=1)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("filter", help="drop unchanged pairs, optionally add language tags")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out-src", required=True)
    p.add_argument("--out-tgt", required=True)
    p.add_argument("--lang")
    p.add_argument("--tag-side", choices=("source", "target", "both"), default="target")
    p.add_argument("--tag-position", choices=("initial", "final"), default="final")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("report", help="aggregate run reports")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--markdown", action="store_true")
    p.add_argument("--pooled", action="store_true", help="recompute P/R/F from summed counts")
    p.add_argument("--decimals", type=int, default=1)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gec-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, OSError, UnicodeDecodeError) as exc:
        print(f"gec-lab {args.command}: {exc}", file=sys.stderr)
        return 1


def dispatch(argv) -> int:
    """Run the CLI on ``argv`` and return its exit status instead of exiting."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
