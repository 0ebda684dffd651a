"""Command-line front end: ``semrel {ic,sim,matrix,relate,eval,sweep}``.

Options can also come from ``--config FILE`` holding ``key=value`` lines
(keys are option names, e.g. ``measure=res`` or ``taxonomy=data/``); flags
given on the command line win.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import ScoringError
from .evaluation import (
    DegenerateRanking, EvaluationError, evaluate, evaluate_scores, load_gold,
    threshold_sweep,
)
from .ic import ICError, corpus_ic, dumps_ic, intrinsic_ic, load_freq, load_ic
from .matrix import (
    COUNT_MODE, MatrixError, build_count_matrix, build_sim_matrix, load_matrix,
    save_matrix,
)
from .measures import Measure, MeasureError, similarity
from .relatedness import lesk_pair, o1_pair, o2_score, relate_pair
from .taxonomy import (
    TAXONOMY_FILES, DepthMode, EdgeSet, HierarchyConfig, TaxonomyError,
    load_taxonomy,
)
from .text import Tokenizer, load_stoplist

log = logging.getLogger("semrel")

EXIT_OK, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2
MEASURE_NAMES = [m.value for m in Measure]
# options that never change what a command writes
_NOT_ECHOED = {"func", "config", "workers", "output", "verbose"}
_FLAGS = {"intrinsic", "no_smoothing", "strict", "no_lowercase", "lenient", "verbose"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- config


def read_config(path) -> dict:
    """Parse a ``key=value`` file; ``#`` starts a comment line."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise UsageError(f"config {path}: {e.strerror or e}") from e
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config {path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _FLAGS:
            value = value.lower() in ("1", "true", "yes", "on")
        values[key] = value
    return values


def write_config(args, path):
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in _resolved(args)), encoding="utf-8")


def _resolved(args):
    items = []
    for key, value in sorted(vars(args).items()):
        if key in _NOT_ECHOED or value is None or value is False:
            continue
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        items.append((key, value))
    return items


def config_line(args) -> str:
    return " ".join(f"{k}={v}" for k, v in _resolved(args))


# ---------------------------------------------------------------- shared loaders


def _add_taxonomy(p):
    g = p.add_argument_group("taxonomy")
    g.add_argument("--taxonomy", metavar="DIR",
                   help="directory holding " + ", ".join(TAXONOMY_FILES))
    for name in ("concepts", "relations", "definitions", "index"):
        g.add_argument(f"--{name}", metavar="FILE", help=f"override {name}.tsv")
    g.add_argument("--edges", choices=[e.value for e in EdgeSet], default=EdgeSet.PAR_CHD.value,
                   help="hierarchy relations (default PAR_CHD)")
    g.add_argument("--depth-mode", choices=[d.value for d in DepthMode], default=DepthMode.MAX.value)


def _add_ic(p):
    g = p.add_argument_group("information content")
    g.add_argument("--ic", metavar="FILE", help="precomputed ic.tsv")
    g.add_argument("--freq", metavar="FILE", help="concept frequency table (freq.tsv)")
    g.add_argument("--intrinsic", action="store_true", help="use structure-based IC")
    g.add_argument("--no-smoothing", action="store_true", help="disable add-one smoothing")
    g.add_argument("--strict", action="store_true", help="reject frequency rows for unknown concepts")


def _add_measure(p):
    p.add_argument("--measure", choices=MEASURE_NAMES, help="similarity measure")
    p.add_argument("--k", type=float, default=2.0, help="zhong base (default 2)")
    p.add_argument("--epsilon", type=float, default=1e-4, help="jcn zero-distance cap is 1/epsilon")


def _add_tokenizer(p):
    g = p.add_argument_group("tokenizer")
    g.add_argument("--no-lowercase", action="store_true")
    g.add_argument("--stoplist", metavar="FILE")


def _add_corpus(p):
    p.add_argument("--corpus", metavar="FILE", help="one document per line, UTF-8")
    p.add_argument("--window", type=int, default=1, help="co-occurrence window (default 1)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--lenient", action="store_true", help="skip lines with invalid UTF-8")


def _taxonomy(args):
    base = Path(args.taxonomy) if args.taxonomy else None
    paths = {}
    for name, default in zip(("concepts", "relations", "definitions", "index"), TAXONOMY_FILES):
        explicit = getattr(args, name)
        if explicit:
            paths[name] = Path(explicit)
        elif base is not None and (base / default).exists():
            paths[name] = base / default
        else:
            paths[name] = None
    if paths["concepts"] is None or paths["relations"] is None:
        raise UsageError("a taxonomy is required: give --taxonomy DIR or --concepts/--relations")
    for name, path in paths.items():
        if path is not None and not path.exists():
            raise UsageError(f"{name} file not found: {path}")
    config = HierarchyConfig(EdgeSet(args.edges), DepthMode(args.depth_mode))
    return load_taxonomy(paths["concepts"], paths["relations"], paths["definitions"],
                         paths["index"], config)


def _ic_table(args, taxonomy, required):
    if args.ic:
        return load_ic(args.ic)
    if args.intrinsic:
        return intrinsic_ic(taxonomy)
    if args.freq:
        freq = load_freq(args.freq, taxonomy, strict=args.strict)
        return corpus_ic(taxonomy, freq, smoothing=not args.no_smoothing, strict=args.strict)
    if required:
        raise UsageError("this measure needs information content: give --ic, --freq or --intrinsic")
    return None


def _tokenizer(args):
    stop = load_stoplist(args.stoplist) if args.stoplist else frozenset()
    return Tokenizer(lowercase=not args.no_lowercase, stoplist=stop)


def _measure(args):
    if not args.measure:
        raise UsageError(f"--measure is required; valid names: {', '.join(MEASURE_NAMES)}")
    return Measure.parse(args.measure)


def _need(args, *names):
    for name in names:
        if not getattr(args, name, None):
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _open_out(args):
    if getattr(args, "output", None) and args.output != "-":
        return open(args.output, "w", encoding="utf-8", newline="")
    return contextlib.nullcontext(sys.stdout)


# ---------------------------------------------------------------- commands


def cmd_ic(args):
    t = _taxonomy(args)
    if not args.intrinsic and not args.freq:
        raise UsageError("give --freq FILE or --intrinsic")
    table = _ic_table(args, t, required=True)
    with _open_out(args) as f:
        f.write(dumps_ic(table, config_line(args)))
    return EXIT_OK


def cmd_sim(args):
    t = _taxonomy(args)
    m = _measure(args)
    ic = _ic_table(args, t, required=m.needs_ic)
    senses = []
    for x in (args.x, args.y):
        resolved = t.resolve(x)
        if not resolved:
            raise UsageError(f"unmappable term {x!r}")
        senses.append(sorted(resolved))
    score = max(similarity(t, m, a, b, ic, k=args.k, epsilon=args.epsilon)
                for a in senses[0] for b in senses[1])
    print(f"{score:.{args.digits}f}")
    return EXIT_OK


def cmd_matrix(args):
    _need(args, "corpus", "output")
    tok = _tokenizer(args)
    if args.mode == COUNT_MODE:
        matrix = build_count_matrix(args.corpus, tok, args.window, args.workers,
                                    args.lenient, config_line(args))
    else:
        t = _taxonomy(args)
        m = _measure(args)
        ic = _ic_table(args, t, required=m.needs_ic)
        matrix = build_sim_matrix(args.corpus, tok, t, m, args.threshold, ic, args.window,
                                  args.workers, args.lenient, config_line(args),
                                  **_measure_params(m, args))
    save_matrix(matrix, args.output)
    log.info("wrote %d entries over %d words to %s", len(matrix), len(matrix.vocab), args.output)
    return EXIT_OK


def _measure_params(m, args):
    if m is Measure.ZHONG:
        return {"k": args.k}
    if m is Measure.JCN:
        return {"epsilon": args.epsilon}
    return {}


def _pair_scorer(args, t, tok):
    method = args.method
    if method == "lesk":
        return lambda a, b: lesk_pair(t, tok, a, b)
    if method == "o1":
        return lambda a, b: o1_pair(t, tok, a, b)
    _need(args, "matrix")
    matrix = load_matrix(args.matrix)
    if method == "o2":
        if matrix.mode != COUNT_MODE:
            raise UsageError("method o2 needs a count-mode matrix")
        return lambda a, b: o2_score(t, tok, matrix, a, b)
    return lambda a, b: relate_pair(t, tok, matrix, a, b)


def read_pairs(path):
    pairs = []
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 2:
                raise UsageError(f"{path}:{lineno}: expected term1,term2")
            if not pairs and [c.strip().lower() for c in row[:2]] == ["term1", "term2"]:
                continue
            pairs.append((row[0].strip(), row[1].strip()))
    return pairs


def score_pairs(pairs, scorer):
    out = []
    for a, b in pairs:
        try:
            out.append((a, b, float(scorer(a, b)), "ok"))
        except ScoringError as e:
            out.append((a, b, None, e.status))
    return out


def cmd_relate(args):
    _need(args, "pairs")
    t = _taxonomy(args)
    tok = _tokenizer(args)
    pairs = read_pairs(args.pairs)
    rows = score_pairs(pairs, _pair_scorer(args, t, tok))
    with _open_out(args) as f:
        f.write(f"# semrel relate {config_line(args)}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["term1", "term2", "score", "status"])
        for a, b, s, status in rows:
            w.writerow([a, b, "" if s is None else repr(s), status])
    return EXIT_OK


def read_scores(path):
    scored = {}
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#") or row[:2] == ["term1", "term2"]:
                continue
            if len(row) < 3:
                raise UsageError(f"{path}:{lineno}: expected term1,term2,score[,status]")
            status = row[3].strip() if len(row) > 3 and row[3].strip() else "ok"
            score = float(row[2]) if status == "ok" else None
            scored[row[0].strip().lower(), row[1].strip().lower()] = (score, status)
    return scored


REPORT_COLUMNS = "threshold\tentries\tn_used\tn_skipped\trho"


def _fmt_rho(rho):
    return "NA" if rho is None else f"{rho:.6f}"


def cmd_eval(args):
    _need(args, "gold")
    gold = load_gold(args.gold)
    entries = "-"
    if args.scores:
        scored = read_scores(args.scores)
        run = lambda: evaluate_scores(gold, scored)
    else:
        _need(args, "method")
        t = _taxonomy(args)
        tok = _tokenizer(args)
        scorer = _pair_scorer(args, t, tok)
        if args.matrix:
            entries = str(len(load_matrix(args.matrix)))
        run = lambda: evaluate(gold, scorer)
    try:
        result = run()
    except EvaluationError as e:
        print(f"semrel eval: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    with _open_out(args) as f:
        f.write(f"# semrel eval {config_line(args)}\n")
        f.write(REPORT_COLUMNS + "\n")
        f.write(f"-\t{entries}\t{result.n_used}\t{result.n_skipped}\t{_fmt_rho(result.rho)}\n")
        skipped = ", ".join(f"{k}={v}" for k, v in result.skipped.items()) or "none"
        f.write(f"# {gold.name}: spearman rho={_fmt_rho(result.rho)} over {result.n_used} "
                f"of {len(gold)} pairs (skipped: {skipped})\n")
    return EXIT_OK


def _thresholds(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad threshold list {text!r}") from None


def cmd_sweep(args):
    _need(args, "corpus", "gold", "thresholds")
    t = _taxonomy(args)
    m = _measure(args)
    ic = _ic_table(args, t, required=m.needs_ic)
    tok = _tokenizer(args)
    gold = load_gold(args.gold)
    result = threshold_sweep(args.corpus, tok, t, ic, m, _thresholds(args.thresholds), gold,
                             window=args.window, workers=args.workers)
    with _open_out(args) as f:
        f.write(f"# semrel sweep vector-{m.value} {config_line(args)}\n")
        f.write(REPORT_COLUMNS + "\n")
        for row in result.sweep:
            f.write(f"{row.threshold:g}\t{row.entries}\t{row.n_used}\t{row.n_skipped}\t"
                    f"{_fmt_rho(row.rho)}\n")
        for row in result.sweep:
            if row.error:
                f.write(f"# T={row.threshold:g}: {row.error}\n")
        if result.rho is None:
            f.write(f"# {gold.name}: no threshold produced a correlation\n")
        else:
            best = max((r for r in result.sweep if r.rho is not None), key=lambda r: r.rho)
            f.write(f"# {gold.name}: best rho={_fmt_rho(best.rho)} at T={best.threshold:g} "
                    f"({best.entries} bigrams, {best.n_used} pairs)\n")
    return EXIT_OK if result.rho is not None else EXIT_DEGENERATE


# ---------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semrel",
        description="Taxonomy similarity, second-order vector relatedness and evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--config", metavar="FILE", help="key=value defaults")
        p.add_argument("-o", "--output", metavar="FILE")
        p.add_argument("-v", "--verbose", action="store_true")
        p.set_defaults(func=func)
        return p

    p = command("ic", cmd_ic, "compute information content (writes ic.tsv)")
    _add_taxonomy(p)
    _add_ic(p)

    p = command("sim", cmd_sim, "similarity of two concepts or terms")
    _add_taxonomy(p)
    _add_measure(p)
    _add_ic(p)
    p.add_argument("--digits", type=int, default=4)
    p.add_argument("x", help="ConceptId or surface term")
    p.add_argument("y", help="ConceptId or surface term")

    p = command("matrix", cmd_matrix, "build a similarity or count matrix from a corpus")
    p.add_argument("--mode", choices=["measure", COUNT_MODE], default="measure")
    _add_corpus(p)
    _add_measure(p)
    p.add_argument("--threshold", type=float, default=0.0,
                   help="keep bigrams scoring strictly above this (default 0)")
    _add_taxonomy(p)
    _add_ic(p)
    _add_tokenizer(p)

    p = command("relate", cmd_relate, "score term pairs (CSV term1,term2)")
    p.add_argument("--method", choices=["vector", "lesk", "o1", "o2"], default="vector")
    p.add_argument("--matrix", metavar="FILE")
    p.add_argument("--pairs", metavar="FILE")
    _add_taxonomy(p)
    _add_tokenizer(p)

    p = command("eval", cmd_eval, "Spearman correlation of scores with a gold standard")
    p.add_argument("--gold", metavar="FILE")
    p.add_argument("--scores", metavar="FILE", help="output of `semrel relate`")
    p.add_argument("--method", choices=["vector", "lesk", "o1", "o2"])
    p.add_argument("--matrix", metavar="FILE")
    _add_taxonomy(p)
    _add_tokenizer(p)

    p = command("sweep", cmd_sweep, "evaluate the vector measure across similarity thresholds")
    _add_corpus(p)
    _add_measure(p)
    p.add_argument("--thresholds", metavar="T1,T2,...", help="strictly increasing list")
    p.add_argument("--gold", metavar="FILE")
    _add_taxonomy(p)
    _add_ic(p)
    _add_tokenizer(p)

    return parser, sub


def parse_args(argv=None):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        saved_for = values.pop("command", args.command)
        if saved_for != args.command:
            raise UsageError(f"config {args.config} was written for '{saved_for}', not '{args.command}'")
        sp = sub.choices[args.command]
        known = {a.dest for a in sp._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"config {args.config}: unknown keys {', '.join(unknown)}")
        sp.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as e:
        print(f"semrel: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DegenerateRanking as e:
        print(f"semrel {args.command}: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, TaxonomyError, ICError, MatrixError, MeasureError, EvaluationError,
            ScoringError, OSError) as e:
        print(f"semrel {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
