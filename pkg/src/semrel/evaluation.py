"""Rank-correlation evaluation against human-rated term pairs."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ScoringError

MIN_PAIRS = 4


class EvaluationError(ValueError):
    pass


class DegenerateRanking(EvaluationError):
    pass


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, tied values sharing the mean of the positions they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    sorted_x = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho: Pearson correlation of tie-averaged ranks."""
    if len(x) != len(y):
        raise EvaluationError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < MIN_PAIRS:
        raise EvaluationError(f"too few points for a correlation: {len(x)} < {MIN_PAIRS}")
    rx, ry = average_ranks(x), average_ranks(y)
    dx, dy = rx - rx.mean(), ry - ry.mean()
    sxx, syy = math.fsum(dx * dx), math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        raise DegenerateRanking("degenerate ranking: all values tied")
    rho = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def fisher_r_to_z(r1: float, n1: int, r2: float, n2: int) -> tuple[float, float]:
    """Independent-samples comparison of two correlations; returns (z, two-tailed p)."""
    for r in (r1, r2):
        if not -1 < r < 1:
            raise EvaluationError(f"|r| must be < 1 for the atanh transform, got {r}")
    for n in (n1, n2):
        if n <= 3:
            raise EvaluationError(f"sample size must exceed 3, got {n}")
    z = (math.atanh(r1) - math.atanh(r2)) / math.sqrt(1 / (n1 - 3) + 1 / (n2 - 3))
    p = math.erfc(abs(z) / math.sqrt(2))
    return z, p


@dataclass(frozen=True)
class RefStandard:
    pairs: tuple
    name: str = "gold"

    def __post_init__(self):
        pairs = tuple((str(a), str(b), float(s)) for a, b, s in self.pairs)
        seen = set()
        for a, b, _ in pairs:
            key = frozenset((a.lower(), b.lower()))
            if key in seen:
                raise EvaluationError(f"duplicate pair in {self.name}: {a}, {b}")
            seen.add(key)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_gold(path, name: str | None = None) -> RefStandard:
    """Read ``term1,term2,score`` rows; a non-numeric first row is a header."""
    path = Path(path)
    rows = []
    first = True
    try:
        f = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise EvaluationError(f"{path}: {e.strerror or e}") from e
    with f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) < 3:
                raise EvaluationError(f"{path}:{lineno}: expected term1,term2,score")
            header, first = first and not _is_number(row[2]), False
            if header:
                continue
            if not _is_number(row[2]):
                raise EvaluationError(f"{path}:{lineno}: bad score {row[2]!r}")
            rows.append((row[0].strip(), row[1].strip(), float(row[2])))
    return RefStandard(tuple(rows), name or path.stem)


@dataclass
class EvalResult:
    rho: float | None
    n_used: int
    n_skipped: int
    skipped: dict = field(default_factory=dict)
    scores: list = field(default_factory=list)
    sweep: list = field(default_factory=list)
    error: str | None = None


def evaluate(gold: RefStandard, scorer: Callable[[str, str], float]) -> EvalResult:
    """Correlate ``scorer`` with the gold ratings, skipping pairs it cannot score.

    ``scores`` lists ``(term1, term2, score_or_None, status)`` in gold order.
    """
    scores = []
    skipped = Counter()
    system, human = [], []
    for a, b, h in gold.pairs:
        try:
            s = float(scorer(a, b))
        except ScoringError as e:
            skipped[e.status] += 1
            scores.append((a, b, None, e.status))
            continue
        scores.append((a, b, s, "ok"))
        system.append(s)
        human.append(h)
    if len(system) < MIN_PAIRS:
        raise EvaluationError(
            f"only {len(system)} scoreable pairs (need {MIN_PAIRS}); skipped {dict(skipped)}")
    rho = spearman(system, human)
    return EvalResult(rho, len(system), sum(skipped.values()), dict(sorted(skipped.items())), scores)


def evaluate_scores(gold: RefStandard, scored: dict) -> EvalResult:
    """Evaluate precomputed ``{(term1, term2): (score, status)}`` results."""
    def lookup(a, b):
        key = (a.lower(), b.lower())
        hit = scored.get(key) or scored.get(key[::-1])
        if hit is None:
            raise _Missing(f"no score for {a}, {b}")
        score, status = hit
        if status != "ok":
            raise _Status(status)
        return score
    return evaluate(gold, lookup)


class _Status(ScoringError):
    def __init__(self, status):
        super().__init__(status)
        self.status = status


class _Missing(ScoringError):
    status = "missing"


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    entries: int
    n_used: int
    n_skipped: int
    rho: float | None
    error: str | None = None


def threshold_sweep(corpus_file, tok, taxonomy, ic, measure, thresholds: Sequence[float],
                    gold: RefStandard, window: int = 1, workers: int = 1) -> EvalResult:
    """Evaluate the vector measure on matrices filtered at each threshold.

    Bigrams are scored once at the lowest threshold; each row's matrix keeps the
    entries strictly above its threshold, which is exactly what a separate
    build at that threshold stores.  The returned result carries the best row's
    statistics at top level and every row in ``sweep``.
    """
    from .matrix import build_sim_matrix, filter_matrix
    from .relatedness import relate_pair

    thresholds = [float(x) for x in thresholds]
    if not thresholds:
        raise EvaluationError("no thresholds given")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise EvaluationError(f"thresholds must be strictly increasing: {thresholds}")
    base = build_sim_matrix(corpus_file, tok, taxonomy, measure, thresholds[0], ic,
                            window=window, workers=workers)
    rows = []
    best = None
    for threshold in thresholds:
        matrix = filter_matrix(base, threshold)
        try:
            result = evaluate(gold, lambda a, b: relate_pair(taxonomy, tok, matrix, a, b))
        except EvaluationError as e:
            rows.append(SweepRow(threshold, len(matrix), 0, len(gold), None, str(e)))
            continue
        rows.append(SweepRow(threshold, len(matrix), result.n_used, result.n_skipped, result.rho))
        if best is None or result.rho > best.rho:
            best = result
    if best is None:
        return EvalResult(None, 0, len(gold), sweep=rows, error="no threshold produced a correlation")
    best.sweep = rows
    return best
