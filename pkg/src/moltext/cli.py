"""Command-line entry point.

Subcommands: split, augment, validate, canonicalize, fingerprint, eval-gen,
eval-cap, report, sample-corpus. Exit codes: 0 success, 1 usage, 2 data
validation, 3 external failure (transport or scorer). Machine output goes
to stdout or --out; diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path

from . import __version__
from .augment import (
    AugmentJob,
    TransportError,
    load_provider_configs,
    pending_request_count,
    run_job,
)
from .dataset import (
    load_augmented,
    load_corpus,
    load_split,
    make_split,
    save_augmented,
    save_corpus,
    save_split,
)
from .errors import MoltextError, ScorerFailed
from .evalharness import (
    ExternalScorerSpec,
    eval_captioning,
    eval_generation,
    load_predictions,
    parse_report,
    render_report,
)
from .fingerprints import default_table, keys_fp, morgan_fp, path_fp
from .sampledata import make_corpus
from .smiles import canonicalize_smiles, is_valid, parse

USAGE_EXIT = 1
DATA_EXIT = 2
EXTERNAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    parser = _Parser(prog="moltext", description=__doc__)
    parser.add_argument("--version", action="version", version=f"moltext {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def corpus_args(p):
        p.add_argument("--corpus", required=True, help="corpus file")
        p.add_argument("--format", default="tsv", choices=["tsv", "jsonl"])

    p = sub.add_parser("split", help="generate a train/valid/test split file")
    corpus_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="corpus-wide validity and caption-leak scan")
    corpus_args(p)
    p.add_argument("--out")

    p = sub.add_parser("canonicalize", help="canonical SMILES for each input line")
    p.add_argument("--in", dest="infile", help="file of SMILES lines (default stdin)")
    p.add_argument("--out")

    p = sub.add_parser("fingerprint", help="hex fingerprints for each input line")
    p.add_argument("--family", required=True, choices=["morgan", "path", "keys"])
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--max-len", type=int, default=7)
    p.add_argument("--in", dest="infile")
    p.add_argument("--out")

    p = sub.add_parser("augment", help="run the caption rewriting pipeline")
    corpus_args(p)
    p.add_argument("--split-file", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--providers", required=True, help="provider config JSON/TOML")
    p.add_argument("--cache-dir", required=True)
    p.add_argument("--out", help="augmented JSONL output")
    p.add_argument("--report", help="job report JSON path")
    p.add_argument("--budget", type=int)
    p.add_argument("--dry-run", action="store_true")

    for task in ("eval-gen", "eval-cap"):
        p = sub.add_parser(task, help=f"evaluate {task.split('-')[1]} predictions")
        corpus_args(p)
        p.add_argument("--pred", required=True, help="TSV id<TAB>prediction")
        p.add_argument("--split-file", help="split sidecar JSON (default: all records are test)")
        p.add_argument("--out")
        p.add_argument("--report-format", default="markdown", choices=["markdown", "tsv", "json"])
        p.add_argument("--fcd-cmd", help="external FCD scorer command")
        p.add_argument("--text2mol-cmd", help="external Text2Mol scorer command")
        p.add_argument("--strict-scorers", action="store_true")

    p = sub.add_parser("report", help="re-render a JSON report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report-format", default="markdown", choices=["markdown", "tsv", "json"])
    p.add_argument("--out")

    p = sub.add_parser("sample-corpus", help="write a synthetic demo corpus")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    return parser


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_lines(infile: str | None) -> list[str]:
    if infile:
        raw = Path(infile).read_text(encoding="utf-8")
    else:
        raw = sys.stdin.read()
    return [line.strip() for line in raw.splitlines() if line.strip()]


def _full_split(corpus):
    from .dataset import CorpusSplit

    return CorpusSplit(train=(), valid=(), test=tuple(r.id for r in corpus))


def _cmd_split(args) -> int:
    corpus = load_corpus(args.corpus, args.format)
    save_split(make_split(corpus, args.seed), args.out)
    print(f"wrote split for {len(corpus)} records to {args.out}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    corpus = load_corpus(args.corpus, args.format)
    lines = []
    bad = 0
    for record in corpus:
        verdict = is_valid(record.smiles)
        leak = record.smiles in record.caption
        if not verdict.valid or leak:
            bad += 1
        lines.append(
            "\t".join(
                [record.id, "valid" if verdict.valid else f"invalid:{verdict.reason}",
                 "leak" if leak else "clean"]
            )
        )
    _write_output("\n".join(lines) + "\n", args.out)
    print(f"{len(corpus) - bad}/{len(corpus)} records clean", file=sys.stderr)
    return 0 if bad == 0 else DATA_EXIT


def _cmd_canonicalize(args) -> int:
    lines = _read_lines(args.infile)
    out = []
    failures = 0
    for line in lines:
        verdict = is_valid(line)
        if not verdict.valid:
            failures += 1
            print(f"invalid SMILES ({verdict.reason}): {line}", file=sys.stderr)
            continue
        out.append(canonicalize_smiles(line))
    _write_output("\n".join(out) + ("\n" if out else ""), args.out)
    return 0 if failures == 0 else DATA_EXIT


def _cmd_fingerprint(args) -> int:
    lines = _read_lines(args.infile)
    out = []
    failures = 0
    for line in lines:
        verdict = is_valid(line)
        if not verdict.valid:
            failures += 1
            print(f"invalid SMILES ({verdict.reason}): {line}", file=sys.stderr)
            continue
        graph = parse(line)
        if args.family == "morgan":
            fp = morgan_fp(graph, radius=args.radius)
        elif args.family == "path":
            fp = path_fp(graph, max_len=args.max_len)
        else:
            fp = keys_fp(graph, default_table())
        out.append(fp.to_hex())
    _write_output("\n".join(out) + ("\n" if out else ""), args.out)
    return 0 if failures == 0 else DATA_EXIT


def _cmd_augment(args) -> int:
    corpus = tuple(load_corpus(args.corpus, args.format))
    split = load_split(args.split_file)
    providers = tuple(load_provider_configs(args.providers))
    job = AugmentJob(
        corpus=corpus,
        split=split,
        k=args.k,
        providers=providers,
        cache_dir=args.cache_dir,
        budget=args.budget,
    )
    if args.dry_run:
        count = pending_request_count(job)
        print(count)
        return 0
    records, report = run_job(job)
    if args.out:
        save_augmented(records, args.out)
        print(f"wrote {len(records)} augmented records to {args.out}", file=sys.stderr)
    if args.report:
        Path(args.report).write_text(
            json.dumps(report.to_dict(), indent=1) + "\n", encoding="utf-8"
        )
    print(
        f"cached={report.cached} fetched={report.fetched} rejected={report.rejected} "
        f"failed={report.failed} retries={report.retries}",
        file=sys.stderr,
    )
    return 0


def _scorers(args):
    scorers = {}
    if getattr(args, "fcd_cmd", None):
        scorers["fcd"] = ExternalScorerSpec("fcd", tuple(shlex.split(args.fcd_cmd)))
    if getattr(args, "text2mol_cmd", None):
        scorers["text2mol"] = ExternalScorerSpec(
            "text2mol", tuple(shlex.split(args.text2mol_cmd))
        )
    return scorers or None


def _cmd_eval(args, task: str) -> int:
    corpus = load_corpus(args.corpus, args.format)
    split = load_split(args.split_file) if args.split_file else _full_split(corpus)
    rows = load_predictions(args.pred)
    evaluate = eval_generation if task == "gen" else eval_captioning
    report = evaluate(
        rows, corpus, split, scorers=_scorers(args), strict_scorers=args.strict_scorers
    )
    rendered = render_report(report, args.report_format).decode("utf-8")
    _write_output(rendered, args.out)
    return 0


def _cmd_report(args) -> int:
    report = parse_report(Path(args.infile).read_bytes())
    _write_output(render_report(report, args.report_format).decode("utf-8"), args.out)
    return 0


def _cmd_sample_corpus(args) -> int:
    corpus = make_corpus(args.n, args.seed)
    save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} records to {args.out}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        if args.command == "split":
            return _cmd_split(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "canonicalize":
            return _cmd_canonicalize(args)
        if args.command == "fingerprint":
            return _cmd_fingerprint(args)
        if args.command == "augment":
            return _cmd_augment(args)
        if args.command == "eval-gen":
            return _cmd_eval(args, "gen")
        if args.command == "eval-cap":
            return _cmd_eval(args, "cap")
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "sample-corpus":
            return _cmd_sample_corpus(args)
        parser.error(f"unknown command {args.command!r}")
    except (ScorerFailed, TransportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXTERNAL_EXIT
    except (MoltextError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    return 0


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
