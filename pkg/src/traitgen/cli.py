"""Command-line interface: generate | corpus | eval | report.

Exit codes: 0 success, 1 usage error, 2 data error.  Every subcommand is
reproducible: identical flags and files produce identical outputs, and
all files are written atomically.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import metrics as metrics_mod
from .lexicon import Lexicon, LexiconError
from .mr import MRError, parse_mr
from .personality import (
    BASELINE_TRAIT,
    PersonalityError,
    TRAITS,
    load_profiles,
    resolve_profile,
)
from .pragmatics import PragmaticsError, marker_registry
from .realization import GenerationError, generate

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _load_lexicon(path: str | None) -> Lexicon:
    return Lexicon.from_file(path) if path else Lexicon.default()


def _load_registry(path: str | None):
    if path is None:
        return marker_registry()
    config = json.loads(Path(path).read_text(encoding="utf-8"))
    return marker_registry(config)


def _profiles(path: str | None):
    return load_profiles(path) if path else None


def cmd_generate(args: argparse.Namespace) -> int:
    mr = parse_mr(args.mr)
    lexicon = _load_lexicon(args.lexicon)
    registry = _load_registry(args.markers)
    profile = resolve_profile(args.trait, _profiles(args.profiles))
    realization = generate(
        mr, profile, seed=args.seed, lexicon=lexicon, registry=registry
    )
    print(realization.text)
    print(realization.style_vector.as_string())
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    spec = corpus_mod.CorpusSpec.from_file(args.spec)
    if args.seed is not None:
        spec = corpus_mod.CorpusSpec(
            splits=spec.splits,
            traits=spec.traits,
            seed=args.seed,
            delexicalize=spec.delexicalize,
        )
    summary = corpus_mod.synthesize(
        spec,
        args.out,
        lexicon=_load_lexicon(args.lexicon),
        registry=_load_registry(args.markers),
        profiles=_profiles(args.profiles),
        threads=args.threads,
    )
    print(json.dumps(summary, indent=2, ensure_ascii=False))
    return 0


def _emit_report(data: dict, out: str | None, fmt: str) -> None:
    if fmt == "json":
        rendered = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "md":
        rendered = metrics_mod.render_report_markdown(data)
    elif fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["personality", "del", "rep", "sub"])
        for personality, row in sorted(data.get("errors", {}).items()):
            writer.writerow([personality, row["del"], row["rep"], row["sub"]])
        rendered = buffer.getvalue()
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(fmt)
    if out:
        corpus_mod.write_atomic(out, rendered)
    else:
        print(rendered, end="")


def cmd_eval(args: argparse.Namespace) -> int:
    records = corpus_mod.read_corpus(args.corpus)
    candidates = (
        corpus_mod.read_corpus(args.candidates) if args.candidates else None
    )
    data = metrics_mod.report(
        records,
        candidates,
        lexicon=_load_lexicon(args.lexicon),
        registry=_load_registry(args.markers),
    )
    _emit_report(data, args.out, args.format)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    data = json.loads(Path(args.input).read_text(encoding="utf-8"))
    _emit_report(data, args.out, args.format)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="traitgen",
        description=(
            "Personality-styled restaurant-domain generation, corpus "
            "synthesis, and evaluation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="realize one MR")
    p_gen.add_argument("--mr", required=True, help="MR string, e.g. 'inform(name[X], eatType[pub], area[riverside])'")
    p_gen.add_argument(
        "--trait", default=BASELINE_TRAIT,
        help=f"personality: one of {', '.join(TRAITS)}, or '{BASELINE_TRAIT}'",
    )
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--lexicon", help="lexicon config override (JSON)")
    p_gen.add_argument("--markers", help="marker registry override (JSON)")
    p_gen.add_argument("--profiles", help="trait profile file (JSON)")
    p_gen.set_defaults(func=cmd_generate)

    p_corpus = sub.add_parser("corpus", help="synthesize corpus files")
    p_corpus.add_argument("--spec", required=True, help="corpus spec (JSON)")
    p_corpus.add_argument("--out", required=True, help="output directory")
    p_corpus.add_argument("--seed", type=int, default=None,
                          help="override the spec's seed")
    p_corpus.add_argument("--threads", type=int, default=1)
    p_corpus.add_argument("--lexicon")
    p_corpus.add_argument("--markers")
    p_corpus.add_argument("--profiles")
    p_corpus.set_defaults(func=cmd_corpus)

    p_eval = sub.add_parser("eval", help="evaluate a corpus or candidates")
    p_eval.add_argument("--corpus", required=True, help="reference corpus (JSONL)")
    p_eval.add_argument("--candidates", help="candidate outputs (JSONL)")
    p_eval.add_argument("--out", help="output file (default: stdout)")
    p_eval.add_argument("--format", choices=("json", "md", "csv"),
                        default="json")
    p_eval.add_argument("--lexicon")
    p_eval.add_argument("--markers")
    p_eval.set_defaults(func=cmd_eval)

    p_report = sub.add_parser("report", help="re-render a report file")
    p_report.add_argument("--input", required=True, help="report JSON")
    p_report.add_argument("--out")
    p_report.add_argument("--format", choices=("json", "md", "csv"),
                          default="md")
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        MRError,
        LexiconError,
        PersonalityError,
        PragmaticsError,
        GenerationError,
        corpus_mod.CorpusError,
        metrics_mod.MetricsError,
        FileNotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"traitgen: error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
