"""Command-line entry point.

    sentiweight lexicon validate SentiWordNet_3.0.0.txt
    sentiweight corpus stats reviews.jsonl
    sentiweight featurize reviews.jsonl swn.txt --level sentence --out X.csv
    sentiweight baseline reviews.jsonl swn.txt --rule average --thresholds -0.1,0,0.1
    sentiweight train-eval reviews.jsonl swn.txt --optimize --format json --out doc.json
    sentiweight optimize reviews.jsonl swn.txt --algorithm svm --out weights.txt
    sentiweight report doc.json --trace trace.csv --out-dir figures/

Exit status: 0 success, 1 usage error, 2 data or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .baselines import RULES, threshold_sweep
from .classifiers import ALGORITHMS, TrainingError
from .config import RunConfig, read_config_file, resolve
from .corpus import DOMAINS, POLARITIES, CorpusError, convert_finegrained, corpus_stats, load_corpus
from .dataset import build_dataset, write_matrix
from .lexicon import AGGREGATION_MODES, LexiconParseError, load_lexicon, validate
from .optimizer import FITNESS_MODES, SIGMA_POLICIES, evolve, read_trace, read_weights, write_trace, write_weights

log = logging.getLogger("sentiweight")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------- argument groups

def _add_common(p):
    p.add_argument("--config", help="INI file with a [sentiweight] section")
    p.add_argument("--seed", type=int)
    p.add_argument("--aggregation", dest="aggregation_mode", choices=AGGREGATION_MODES)
    p.add_argument("-v", "--verbose", action="store_true")


def _add_data(p, level=True):
    p.add_argument("corpus", nargs="?", help="JSON Lines corpus (or $SENTIWEIGHT_CORPUS)")
    p.add_argument("lexicon", nargs="?", help="SentiWordNet 3.0 file (or $SENTIWEIGHT_LEXICON)")
    if level:
        p.add_argument("--level", choices=("sentence", "document"))
        p.add_argument("--recompute-doc-ratios", dest="recompute_doc_ratios", action="store_const",
                       const=True, help="rebuild document ratio slots from document sums")


def _add_es(p):
    g = p.add_argument_group("evolution strategy")
    g.add_argument("--generations", type=int)
    g.add_argument("--mu", type=int)
    g.add_argument("--lambda", dest="lam", type=int)
    g.add_argument("--adapt-every", dest="adapt_every", type=int)
    g.add_argument("--c", type=float, help="1/5-rule factor in (0, 1)")
    g.add_argument("--sigma-policy", dest="sigma_policy", choices=SIGMA_POLICIES)
    g.add_argument("--fitness", dest="fitness_mode", choices=FITNESS_MODES)
    g.add_argument("--fitness-k", dest="fitness_k", type=int)
    g.add_argument("--jobs", type=int, help="parallel fitness evaluations (default: CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sentiweight", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    lex = sub.add_parser("lexicon", help="lexicon utilities")
    lsub = lex.add_subparsers(dest="action", parser_class=_Parser)
    p = lsub.add_parser("validate", help="parse a SentiWordNet file and report problems")
    p.add_argument("path")
    p.add_argument("-v", "--verbose", action="store_true")

    cor = sub.add_parser("corpus", help="corpus utilities")
    csub = cor.add_subparsers(dest="action", parser_class=_Parser)
    p = csub.add_parser("stats", help="document and sentence counts by domain and polarity")
    p.add_argument("path")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("-v", "--verbose", action="store_true")
    p = csub.add_parser("convert", help="convert the original fine-grained text release to JSON Lines")
    p.add_argument("path")
    p.add_argument("--out")
    p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("featurize", help="write the 32-column feature matrix")
    _add_data(p)
    _add_common(p)
    p.add_argument("--out")

    p = sub.add_parser("baseline", help="lexicon-only classifiers over a threshold sweep")
    _add_data(p)
    _add_common(p)
    p.add_argument("--rule", choices=RULES, default="term-count")
    p.add_argument("--thresholds", type=_float_list, default=[0.0])
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.add_argument("--plot", help="also render the sweep to this image file")

    p = sub.add_parser("train-eval", help="k-fold evaluation of the five classifiers")
    _add_data(p)
    _add_common(p)
    _add_es(p)
    p.add_argument("--k", type=int)
    p.add_argument("--algorithms", type=lambda s: s.split(","), default=list(ALGORITHMS))
    p.add_argument("--weights", help="fixed weight file for the 'with' column")
    p.add_argument("--optimize", action="store_true", help="evolve weights inside each training fold")
    p.add_argument("--paper-mode", action="store_true",
                   help="evolve weights once on all data before CV (leaks held-out rows)")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("optimize", help="evolve a weight vector on the whole dataset")
    _add_data(p)
    _add_common(p)
    _add_es(p)
    p.add_argument("--algorithm", choices=ALGORITHMS)
    p.add_argument("--out", required=True, help="weights file")
    p.add_argument("--trace", help="per-generation trace file (default: <out>.trace.csv)")

    p = sub.add_parser("report", help="render saved JSON reports as tables and figures")
    p.add_argument("reports", nargs="+", help="JSON reports written by train-eval")
    p.add_argument("--trace", action="append", default=[], help="trace file(s) from optimize")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--figure-format", choices=("png", "svg", "pdf"), default="png")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


# ---------------------------------------------------------------- commands

_FLAG_KEYS = ("seed", "aggregation_mode", "level", "recompute_doc_ratios", "k", "algorithm", "jobs",
              "generations", "mu", "lam", "adapt_every", "c", "sigma_policy", "fitness_mode", "fitness_k",
              "corpus", "lexicon")


def _run_config(args, command: str) -> RunConfig:
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    flags = {k: getattr(args, k, None) for k in _FLAG_KEYS}
    if command == "train-eval" and args.paper_mode and args.fitness_mode is None \
            and "fitness" not in file_values and "fitness_mode" not in file_values:
        flags["fitness_mode"] = "resubstitution"
    if "jobs" not in file_values and flags["jobs"] is None:
        flags["jobs"] = os.cpu_count() or 1
    cfg = resolve(file_values, flags)
    if not cfg.corpus:
        raise UsageError(f"{command}: corpus path required (argument or $SENTIWEIGHT_CORPUS)")
    if not cfg.lexicon:
        raise UsageError(f"{command}: lexicon path required (argument or $SENTIWEIGHT_LEXICON)")
    return cfg


def _load(cfg: RunConfig):
    index = load_lexicon(cfg.lexicon, cfg.aggregation_mode)
    corpus = load_corpus(cfg.corpus)
    return corpus, index


def cmd_lexicon_validate(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        count, errors = validate(fh)
    for err in errors[:50]:
        print(err, file=sys.stderr)
    print(f"entries: {count}")
    print(f"violations: {len(errors)}")
    return EXIT_DATA if errors else EXIT_OK


def cmd_corpus_stats(args) -> int:
    corpus = load_corpus(args.path)
    stats = corpus_stats(corpus)
    out = []
    if args.format == "csv":
        out.append("unit,polarity," + ",".join(DOMAINS) + ",total")
        for unit in ("documents", "sentences"):
            for pol in POLARITIES:
                row = [stats[unit][pol, d] for d in DOMAINS]
                out.append(",".join([unit, pol] + [str(x) for x in row] + [str(sum(row))]))
    else:
        for unit in ("documents", "sentences"):
            out.append(f"{unit}")
            out.append(f"{'polarity':<10}" + "".join(f"{d:>13}" for d in DOMAINS) + f"{'total':>8}")
            for pol in POLARITIES:
                row = [stats[unit][pol, d] for d in DOMAINS]
                out.append(f"{pol:<10}" + "".join(f"{x:>13}" for x in row) + f"{sum(row):>8}")
            out.append("")
        out.append(f"dropped neutral: {corpus.n_dropped_documents} documents, "
                   f"{corpus.n_dropped_sentences} sentences")
    print("\n".join(out))
    return EXIT_OK


def cmd_corpus_convert(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        records = list(convert_finegrained(fh))
    with _output(args.out) as out:
        for rec in records:
            out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_featurize(args) -> int:
    cfg = _run_config(args, "featurize")
    cfg.outputs = {"matrix": args.out}
    corpus, index = _load(cfg)
    data = build_dataset(corpus, index, cfg.level, cfg.recompute_doc_ratios)
    with _output(args.out) as out:
        write_matrix(data, out, cfg.manifest_lines("featurize"))
    return EXIT_OK


def cmd_baseline(args) -> int:
    cfg = _run_config(args, "baseline")
    corpus, index = _load(cfg)
    table = threshold_sweep(corpus, index, args.rule, args.thresholds, level=cfg.level)
    with _output(args.out) as out:
        for line in cfg.manifest_lines("baseline"):
            out.write(f"# {line}\n")
        if args.format == "csv":
            out.write("rule,level,threshold,accuracy\n")
            for t, acc in table:
                out.write(f"{args.rule},{cfg.level},{t!r},{acc!r}\n")
        else:
            out.write(f"rule: {args.rule}  level: {cfg.level}  instances: "
                      f"{len(corpus) if cfg.level == 'document' else len(corpus.sentence_instances())}\n")
            out.write(f"{'threshold':>12}{'accuracy %':>12}\n")
            for t, acc in table:
                out.write(f"{t:>12g}{acc * 100:>12.2f}\n")
    if args.plot:
        from .plotting import plot_sweep
        plot_sweep(table, args.plot, rule=args.rule)
    return EXIT_OK


def cmd_train_eval(args) -> int:
    from .evaluation import emit_report, run_grid

    cfg = _run_config(args, "train-eval")
    unknown = [a for a in args.algorithms if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithm(s): {', '.join(unknown)}")
    cfg.outputs = {"report": args.out, "weights": args.weights}
    corpus, index = _load(cfg)
    data = build_dataset(corpus, index, cfg.level, cfg.recompute_doc_ratios)
    weights = None
    if args.weights:
        with open(args.weights, encoding="utf-8") as fh:
            weights = read_weights(fh)
    manifest = cfg.manifest("train-eval")
    manifest.update(optimize=args.optimize, paper_mode=args.paper_mode, algorithms=args.algorithms)
    report = run_grid(data, args.algorithms, cfg.hyper, cfg.k, cfg.seed, weights=weights,
                      optimize=args.optimize or args.paper_mode, es_config=cfg.es,
                      paper_mode=args.paper_mode, jobs=cfg.jobs, config=manifest)
    text = emit_report([report], args.format)
    with _output(args.out) as out:
        if args.format != "json":
            out.write(f"# manifest: {json.dumps(manifest, sort_keys=True)}\n")
        out.write(text)
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _run_config(args, "optimize")
    trace_path = args.trace or f"{args.out}.trace.csv"
    cfg.outputs = {"weights": args.out, "trace": trace_path}
    corpus, index = _load(cfg)
    data = build_dataset(corpus, index, cfg.level, cfg.recompute_doc_ratios)
    res = evolve(data, cfg.algorithm, cfg.hyper, cfg.es, jobs=cfg.jobs)
    lines = cfg.manifest_lines("optimize") + [f"fitness: {res.fitness!r}"]
    with _output(args.out) as out:
        write_weights(res.weights, out, lines)
    with _output(trace_path) as out:
        write_trace(res.trace, out, lines)
    log.info("best fitness %.4f after %d evaluations", res.fitness, res.n_evaluations)
    return EXIT_OK


def cmd_report(args) -> int:
    from .evaluation import emit_report, read_reports
    from .plotting import plot_report, plot_trace

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for path in args.reports:
        reports.extend(read_reports(Path(path).read_text(encoding="utf-8")))
    (out_dir / "report.csv").write_text(emit_report(reports, "csv"), encoding="utf-8")
    (out_dir / "report.txt").write_text(emit_report(reports, "text"), encoding="utf-8")
    written = ["report.csv", "report.txt"]
    for i, rep in enumerate(reports):
        name = f"metrics_{rep.level}" + (f"_{i}" if len(reports) > 1 else "") + f".{args.figure_format}"
        plot_report(rep, out_dir / name)
        written.append(name)
    for i, path in enumerate(args.trace):
        with open(path, encoding="utf-8") as fh:
            trace = read_trace(fh)
        name = f"trace_{i}.{args.figure_format}"
        plot_trace(trace, out_dir / name)
        written.append(name)
    for name in written:
        print(out_dir / name)
    return EXIT_OK


_COMMANDS = {
    ("lexicon", "validate"): cmd_lexicon_validate,
    ("corpus", "stats"): cmd_corpus_stats,
    ("corpus", "convert"): cmd_corpus_convert,
    ("featurize", None): cmd_featurize,
    ("baseline", None): cmd_baseline,
    ("train-eval", None): cmd_train_eval,
    ("optimize", None): cmd_optimize,
    ("report", None): cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    key = (args.command, getattr(args, "action", None))
    if key not in _COMMANDS:
        parser.print_usage(sys.stderr)
        print(f"sentiweight {args.command}: missing action", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[key](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sentiweight: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LexiconParseError, CorpusError, TrainingError, ValueError, OSError) as exc:
        print(f"sentiweight: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
