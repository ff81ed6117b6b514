"""Command line interface.

Subcommands: build-morphtable, train-bpe, build-vocab, encode, decode,
stats, selftest.  Artifact files live in a directory given by --dir or the
MORPHPIECE_DIR environment variable.  Exit codes: 0 success, 1 usage error,
2 data or artifact error, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, analysis
from .bpe import BpeModel, load_published_merges, train
from .detokenizer import detokenize_verbose
from .errors import ArtifactMissingError, MorphPieceError
from .morphtable import ColumnMap, build_reverse, ingest, load_table, save_table, trim
from .tokenizer import (
    BPE_MERGES_FILE,
    BPE_VOCAB_FILE,
    MORPHTABLE_FILE,
    VOCAB_FILE,
    MorphPieceTokenizer,
)
from .vocab import DEFAULT_SPECIALS, END_OF_TEXT, merge_vocabularies, serialize

DIR_ENV = "MORPHPIECE_DIR"


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _artifact_dir(args) -> str:
    directory = args.dir or os.environ.get(DIR_ENV)
    if not directory:
        raise MorphPieceError(f"no artifact directory (pass --dir or set {DIR_ENV})")
    return directory


def _read_docs(args) -> list[str]:
    if getattr(args, "text", None) is not None:
        return [args.text]
    if getattr(args, "input", None):
        with open(args.input, encoding="utf-8") as fh:
            return [line.rstrip("\n") for line in fh]
    return [line.rstrip("\n") for line in sys.stdin]


def _parse_columns(spec: str) -> ColumnMap:
    fields = {}
    for item in spec.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise MorphPieceError(f"bad --columns item {item!r} (expected key=value)")
        fields[key.strip()] = value
    try:
        return ColumnMap(
            surface_col=int(fields.pop("surface")),
            segmentation_col=int(fields.pop("segmentation")),
            separator=fields.pop("sep", "|"),
            convention=fields.pop("convention", "stem-first"),
        )
    except (KeyError, ValueError) as exc:
        raise MorphPieceError(f"bad --columns spec {spec!r}: {exc}") from None


def _cmd_build_morphtable(args) -> int:
    out_dir = args.out or _artifact_dir(args)
    fmt = _parse_columns(args.columns) if args.columns else "canonical"
    table, report = ingest(args.source, fmt)
    trimmed = trim(table, args.min_count)
    os.makedirs(out_dir, exist_ok=True)
    save_table(trimmed, os.path.join(out_dir, MORPHTABLE_FILE))
    reverse = build_reverse(trimmed)
    print(f"lines: {report.lines}")
    print(f"malformed: {report.malformed}")
    print(f"duplicates: {report.duplicates}")
    print(f"entries: {len(table)}")
    print(f"entries_after_trim: {len(trimmed)}")
    print(f"inventory: {len(trimmed.inventory)}")
    print(f"reverse_collisions: {len(reverse.collisions)}")
    return 0


def _cmd_train_bpe(args) -> int:
    out_dir = args.out or _artifact_dir(args)
    if args.no_exclusion:
        exclusion: frozenset[str] = frozenset()
    else:
        table_path = os.path.join(out_dir, MORPHTABLE_FILE)
        if not os.path.isfile(table_path):
            raise ArtifactMissingError(table_path)
        exclusion = frozenset(load_table(table_path).surfaces())
    with open(args.corpus, encoding="utf-8") as fh:
        docs = [line.rstrip("\n") for line in fh]
    model = train(
        docs,
        args.target_size,
        exclusion,
        byte_map=args.byte_map,
        backend=args.backend,
    )
    os.makedirs(out_dir, exist_ok=True)
    model.save(
        os.path.join(out_dir, BPE_MERGES_FILE),
        os.path.join(out_dir, BPE_VOCAB_FILE),
    )
    print(f"excluded_surfaces: {len(exclusion)}")
    print(f"merges: {len(model.merges)}")
    print(f"vocab: {len(model.vocab)}")
    return 0


def _cmd_build_vocab(args) -> int:
    out_dir = args.out or _artifact_dir(args)
    table_path = os.path.join(out_dir, MORPHTABLE_FILE)
    merges_path = os.path.join(out_dir, BPE_MERGES_FILE)
    vocab_path = os.path.join(out_dir, BPE_VOCAB_FILE)
    for path in (table_path, merges_path, vocab_path):
        if not os.path.isfile(path):
            raise ArtifactMissingError(path)
    table = load_table(table_path)
    model = BpeModel.load(merges_path, vocab_path)
    specials = (END_OF_TEXT,) if args.no_joiner else DEFAULT_SPECIALS
    bpe_tokens = [t for t, _ in sorted(model.vocab.items(), key=lambda kv: kv[1])]
    vocab = merge_vocabularies(table.inventory, bpe_tokens, specials)
    serialize(vocab, os.path.join(out_dir, VOCAB_FILE))
    overlap = len(table.inventory) + len(bpe_tokens) + len(specials) - len(vocab)
    print(f"morph_inventory: {len(table.inventory)}")
    print(f"bpe_tokens: {len(bpe_tokens)}")
    print(f"specials: {len(specials)}")
    print(f"overlap: {overlap}")
    print(f"vocab: {len(vocab)}")
    if args.budget:
        print(f"budget: {args.budget} ({'within' if len(vocab) <= args.budget else 'over'})")
    return 0


def _load_tokenizer(args) -> MorphPieceTokenizer:
    return MorphPieceTokenizer.from_dir(_artifact_dir(args))


def _cmd_encode(args) -> int:
    tokenizer = _load_tokenizer(args)
    docs = _read_docs(args)
    out = sys.stdout
    for doc in docs:
        if args.emit == "ids":
            encoded = tokenizer.encode(doc)
            out.write(" ".join(str(i) for i in encoded.ids) + "\n")
        elif args.emit == "tokens":
            out.write(" ".join(tokenizer.tokenize(doc)) + "\n")
        else:
            traces = tokenizer.coverage_trace(doc)
            out.write(" ".join(t.route.value for t in traces) + "\n")
    return 0


def _cmd_decode(args) -> int:
    tokenizer = _load_tokenizer(args)
    reverse = build_reverse(tokenizer.table)
    docs = _read_docs(args)
    unverified_total = 0
    out = sys.stdout
    for doc in docs:
        pieces = doc.split()
        if args.source == "ids":
            try:
                ids = [int(p) for p in pieces]
            except ValueError as exc:
                raise MorphPieceError(f"bad id in input: {exc}") from None
            tokens = [tokenizer.vocab.token_of(i) for i in ids]
        else:
            tokens = pieces
        text, report = detokenize_verbose(tokens, reverse, tokenizer.model, tokenizer.vocab)
        unverified_total += report.unverified
        out.write(text + "\n")
    if args.report_unverified:
        print(f"unverified_word_groups\t{unverified_total}", file=sys.stderr)
    return 0


def _parse_tokenizer_specs(specs: str, tokenizer: MorphPieceTokenizer) -> list:
    adapters = []
    for item in specs.split(","):
        item = item.strip()
        name, sep, arg = item.partition("=")
        if name == "whitespace" and not sep:
            adapters.append(analysis.WhitespaceAdapter())
        elif name == "morphpiece" and not sep:
            adapters.append(analysis.MorphPieceAdapter(tokenizer))
        elif name == "bpe" and not sep:
            adapters.append(analysis.BpeAdapter(tokenizer.model))
        elif name == "wordpiece" and sep:
            adapters.append(analysis.WordPieceAdapter.from_file(arg))
        elif name == "refbpe" and sep:
            adapters.append(analysis.BpeAdapter(load_published_merges(arg), name="refbpe"))
        else:
            raise MorphPieceError(f"unknown tokenizer spec {item!r}")
    return adapters


def _cmd_stats(args) -> int:
    tokenizer = _load_tokenizer(args)
    with open(args.corpus, encoding="utf-8") as fh:
        docs = [line.rstrip("\n") for line in fh]
    if args.report == "fertility":
        adapters = _parse_tokenizer_specs(args.tokenizers, tokenizer)
        report = analysis.fertility(docs, adapters)
    else:
        cov = analysis.coverage(docs, tokenizer)
        if args.report == "coverage":
            report = cov
        else:
            report = analysis.UnsplitReport(tuple(cov.top_unsplit(args.top)), cov.total_pretokens)
        if args.plot:
            if args.report != "coverage":
                raise MorphPieceError("--plot only applies to --report coverage")
            analysis.plot_coverage(cov, args.plot)
    text = analysis.emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(backend=args.backend)


def build_parser() -> _Parser:
    parser = _Parser(prog="morphpiece", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"morphpiece {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p):
        p.add_argument("--dir", "-d", help=f"artifact directory (default: ${DIR_ENV})")

    p = sub.add_parser("build-morphtable", help="ingest a morphology source and write the table artifact")
    common(p)
    p.add_argument("--source", required=True, help="morphology source file")
    p.add_argument("--columns", help="generic TSV mapping, e.g. surface=0,segmentation=2,sep=|,convention=stem-first")
    p.add_argument("--min-count", type=int, default=1, help="trim threshold on morpheme usage counts")
    p.add_argument("--out", help="output directory (default: artifact dir)")
    p.set_defaults(func=_cmd_build_morphtable)

    p = sub.add_parser("train-bpe", help="train the fallback BPE model")
    common(p)
    p.add_argument("--corpus", required=True, help="training corpus, one document per line")
    p.add_argument("--target-size", type=int, default=32000)
    p.add_argument("--byte-map", default="morphsafe", choices=["morphsafe", "gpt2"])
    p.add_argument("--backend", default=None, choices=["numba", "numpy", "auto"])
    p.add_argument("--no-exclusion", action="store_true", help="do not exclude morph table surfaces")
    p.add_argument("--out", help="output directory (default: artifact dir)")
    p.set_defaults(func=_cmd_train_bpe)

    p = sub.add_parser("build-vocab", help="merge morph inventory and BPE tokens into one id space")
    common(p)
    p.add_argument("--no-joiner", action="store_true", help="omit the no-space joiner special")
    p.add_argument("--budget", type=int, default=0, help="informational vocab budget")
    p.add_argument("--out", help="output directory (default: artifact dir)")
    p.set_defaults(func=_cmd_build_vocab)

    p = sub.add_parser("encode", help="text to tokens, ids or a routing trace")
    common(p)
    p.add_argument("--text", help="encode this text instead of reading lines")
    p.add_argument("--input", help="input file, one document per line (default: stdin)")
    p.add_argument("--emit", default="tokens", choices=["ids", "tokens", "trace"])
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="ids or tokens back to text")
    common(p)
    p.add_argument("--text", help="decode this line instead of reading lines")
    p.add_argument("--input", help="input file, one document per line (default: stdin)")
    p.add_argument("--from", dest="source", default="ids", choices=["ids", "tokens"])
    p.add_argument("--report-unverified", action="store_true",
                   help="print the unverified word group count to stderr")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("stats", help="corpus statistics")
    common(p)
    p.add_argument("--corpus", required=True, help="corpus file, one document per line")
    p.add_argument("--report", default="fertility", choices=["fertility", "coverage", "unsplit"])
    p.add_argument("--tokenizers", default="whitespace,morphpiece,bpe",
                   help="comma list: whitespace, morphpiece, bpe, wordpiece=VOCAB, refbpe=MERGES")
    p.add_argument("--top", type=int, default=20, help="rows in the unsplit ranking")
    p.add_argument("--format", default="tsv", choices=["tsv", "json"])
    p.add_argument("--plot", help="write a coverage chart to this path")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("selftest", help="build from bundled data and check the pipeline")
    p.add_argument("--backend", default=None, choices=["numba", "numpy", "auto"])
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    if not argv:
        parser.print_help(sys.stderr)
        return 1
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except MorphPieceError as exc:
        print(f"morphpiece: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"morphpiece: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
