"""Command-line interface: train, tokenize, variant, score, compare, verify.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import MUTATIONS, compare_tokenizers, verify
from .bpe import UNKNOWN_POLICIES, tokenize_corpus, train_bpe
from .corpus import load_corpora
from .errors import HyperparameterError, LabError
from .metrics import ACCOUNTING_MODES, CONVENTIONS, DEFAULT_ALPHA, DEFAULT_PERCENTILES, score
from .model_io import load_model, save_model
from .variants import DuplicationTokenizer, RandomDropTokenizer, inflate_vocab

log = logging.getLogger("renyi_bpe")

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


def _percentiles(text):
    try:
        g1, g2 = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers, e.g. 0.03,0.83")
    return g1, g2


def _seeds(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")


def run_config(args) -> dict:
    """The fully resolved flags, recorded in every output for provenance."""
    cfg = {"tool": "renyi-bpe", "tool_version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "verbose"):
            continue
        if isinstance(value, tuple):
            value = list(value)
        cfg[key] = value
    return cfg


def _write(text, output):
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _config_header(cfg):
    return "".join(f"# {k}: {json.dumps(v, ensure_ascii=False)}\n" for k, v in cfg.items())


def cmd_train(args):
    corpus = load_corpora(args.corpus, args.max_lines)
    tok = train_bpe(corpus, args.merges)
    if len(tok.merges) < args.merges:
        log.warning("training stopped early after %d of %d merges", len(tok.merges), args.merges)
    save_model(tok, args.output, run_config(args))
    return EXIT_OK


def cmd_tokenize(args):
    model = load_model(args.model)
    corpus = load_corpora(args.corpus, args.max_lines)
    tc = tokenize_corpus(model, corpus, workers=args.workers, unknown=args.unknown)
    _write("".join(line + "\n" for line in tc.render_lines()), args.output)
    return EXIT_OK


def _variant_path(output, seed, many):
    if "{seed}" in output:
        return output.replace("{seed}", str(seed))
    if not many:
        return output
    p = Path(output)
    return str(p.with_name(f"{p.stem}-seed{seed}{p.suffix}"))


def cmd_variant(args):
    base = load_model(args.model)
    if getattr(base, "base", None) is not None:
        raise LabError("variants must be built from a base tokenizer model")
    if args.kind == "inflate":
        if args.extra is None:
            raise HyperparameterError("--extra is required for kind=inflate")
        save_model(inflate_vocab(base, args.extra), args.output, run_config(args))
        return EXIT_OK
    if args.N is None or args.k is None:
        raise HyperparameterError(f"--N and --k are required for kind={args.kind}")
    if not args.corpus:
        raise HyperparameterError("a corpus is needed to rank subword frequencies")
    corpus = load_corpora(args.corpus, args.max_lines)
    tokenized = tokenize_corpus(base, corpus, workers=args.workers)
    build = RandomDropTokenizer.build if args.kind == "random_drop" else DuplicationTokenizer.build
    seeds = args.seed
    for seed in seeds:
        variant = build(base, tokenized, args.N, args.k, seed)
        cfg = run_config(args)
        cfg["seed"] = seed
        save_model(variant, _variant_path(args.output, seed, len(seeds) > 1), cfg)
    return EXIT_OK


def _score_table(report):
    cols = [(f"Eff{report.alpha:g}", f"{report.renyi_efficiency:.4f}"),
            ("PCT", f"{report.percentile_freq:.4f}"),
            ("SEQ", f"{report.tokens_per_line:.2f}"),
            ("H", f"{report.shannon_entropy:.4f}"),
            (f"H{report.alpha:g}", f"{report.renyi_entropy:.4f}"),
            ("|V|", str(report.effective_vocab))]
    widths = [max(len(h), len(v)) for h, v in cols]
    head = "  ".join(h.rjust(w) for (h, _), w in zip(cols, widths))
    row = "  ".join(v.rjust(w) for (_, v), w in zip(cols, widths))
    return head + "\n" + row + "\n"


def cmd_score(args):
    model = load_model(args.model)
    corpus = load_corpora(args.corpus, args.max_lines)
    tc = tokenize_corpus(model, corpus, workers=args.workers)
    report = score(tc, args.alpha, args.percentiles, args.accounting, model, args.efficiency_convention)
    cfg = run_config(args)
    if args.format == "structured":
        text = json.dumps({"config": cfg, "metrics": report.to_dict()}, indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"
    else:
        text = _config_header(cfg) + _score_table(report)
    _write(text, args.output)
    return EXIT_OK


def cmd_compare(args):
    baseline = load_model(args.baseline)
    variants = [load_model(p) for p in args.variant]
    corpus = load_corpora(args.corpus, args.max_lines)
    report = compare_tokenizers(corpus, baseline, variants, args.alpha, args.percentiles,
                                args.accounting, args.efficiency_convention, args.workers)
    cfg = run_config(args)
    if args.format == "structured":
        text = json.dumps({"config": cfg, "report": report.to_dict()}, indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"
    else:
        text = _config_header(cfg) + report.to_table() + "\n"
    _write(text, args.output)
    return EXIT_OK


def cmd_verify(args):
    report = verify(seed=args.seed, instances=args.instances, mutation=args.mutate)
    cfg = run_config(args)
    if args.format == "structured":
        text = json.dumps({"config": cfg, "report": report.to_dict()}, indent=2, sort_keys=True) + "\n"
    else:
        text = _config_header(cfg) + report.to_table() + "\n"
    _write(text, args.output)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _add_corpus_args(p, required=True):
    p.add_argument("corpus", nargs="+" if required else "*",
                   help="UTF-8 text file(s); several files are concatenated in order")
    p.add_argument("--max-lines", type=int, default=None, help="read at most this many lines per file")


def _add_metric_args(p):
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Renyi order (default: 3)")
    p.add_argument("--percentiles", type=_percentiles, default=DEFAULT_PERCENTILES,
                   metavar="G1,G2", help="frequency-rank band for PCT (default: 0.03,0.83)")
    p.add_argument("--accounting", choices=ACCOUNTING_MODES, default="surfaced")
    p.add_argument("--efficiency-convention", choices=CONVENTIONS, default="consistent")
    p.add_argument("--format", choices=("table", "structured"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="renyi-bpe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="learn a BPE merge list")
    _add_corpus_args(p)
    p.add_argument("--merges", type=int, required=True, help="number of merges to learn")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tokenize", help="write the tokenized corpus, one line per input line")
    p.add_argument("--model", required=True)
    _add_corpus_args(p)
    p.add_argument("--unknown", choices=UNKNOWN_POLICIES, default="reject")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("variant", help="build a random_drop, duplication or inflate variant")
    p.add_argument("--model", required=True, help="base model file")
    p.add_argument("--kind", required=True, choices=("random_drop", "duplication", "inflate"))
    p.add_argument("--N", type=int, help="candidate pool (random_drop) or top count (duplication)")
    p.add_argument("--k", type=int, help="drop count (random_drop) or duplication factor")
    p.add_argument("--seed", type=_seeds, default=[1], help="seed or comma-separated seeds")
    p.add_argument("--extra", type=int, help="synthetic entries to add (inflate)")
    _add_corpus_args(p, required=False)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", required=True,
                   help="output model; '{seed}' is replaced by the seed when several are given")
    p.set_defaults(func=cmd_variant)

    p = sub.add_parser("score", help="intrinsic metrics of one model on a corpus")
    p.add_argument("--model", required=True)
    _add_corpus_args(p)
    _add_metric_args(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="baseline-vs-variant metric table")
    p.add_argument("--baseline", required=True)
    p.add_argument("--variant", action="append", default=[], help="variant model (repeatable)")
    _add_corpus_args(p)
    _add_metric_args(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the entropy-change checks; exit 1 on any failure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--format", choices=("table", "structured"), default="table")
    p.add_argument("--mutate", choices=sorted(MUTATIONS), default=None, help=argparse.SUPPRESS)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except LabError as exc:
        print(f"renyi-bpe {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
