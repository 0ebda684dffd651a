"""Word-by-word matrices built from corpus bigrams.

Two flavours share one container: ``measure`` matrices hold the taxonomy
similarity of each bigram's words (kept only above a threshold), ``count``
matrices hold raw bigram frequencies.
"""

from __future__ import annotations

import hashlib
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

from .ic import IcTable
from .measures import Measure, MeasureError, similarity
from .taxonomy import Taxonomy
from .text import Tokenizer

log = logging.getLogger(__name__)

FORMAT_TAG = "#semrel-matrix"
FORMAT_VERSION = "v1"
MEASURE_MODE = "measure"
COUNT_MODE = "count"


class MatrixError(ValueError):
    pass


class CorpusError(MatrixError):
    pass


def read_corpus(path, lenient: bool = False) -> tuple[list[str], str]:
    """Return the decoded lines of a corpus file and the sha256 of its bytes."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CorpusError(f"{path}: unreadable corpus ({e.strerror or e})") from e
    lines = []
    offset = 0
    raw_lines = data.split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()
    for lineno, raw in enumerate(raw_lines, start=1):
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError as e:
            msg = f"{path}:{lineno}: invalid UTF-8 at byte offset {offset + e.start}"
            if not lenient:
                raise CorpusError(msg) from None
            log.warning("%s; line skipped", msg)
        offset += len(raw) + 1
    return lines, hashlib.sha256(data).hexdigest()


def iter_bigrams(tokens: list[str], window: int = 1) -> Iterator[tuple[str, str]]:
    """Ordered token pairs at most ``window`` positions apart."""
    n = len(tokens)
    for i, w in enumerate(tokens):
        for j in range(i + 1, min(i + window, n - 1) + 1):
            yield w, tokens[j]


def count_bigrams(lines: Iterable[str], tok: Tokenizer, window: int = 1) -> Counter:
    counts = Counter()
    for line in lines:
        counts.update(iter_bigrams(tok(line), window))
    return counts


def _count_chunk(args):
    lines, tok, window = args
    return count_bigrams(lines, tok, window)


def _chunks(seq, n):
    size = max(1, math.ceil(len(seq) / n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def _bigram_counts(lines, tok, window, workers):
    if workers <= 1 or len(lines) < 2:
        return count_bigrams(lines, tok, window)
    total = Counter()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_count_chunk, [(c, tok, window) for c in _chunks(lines, workers)]):
            total.update(part)
    return total


def extract_bigrams(corpus_file, tok: Tokenizer, window: int = 1, workers: int = 1,
                    lenient: bool = False) -> Counter:
    """Aggregate ordered bigram counts over a one-document-per-line corpus.

    Pairs never cross a line boundary.
    """
    lines, _ = read_corpus(corpus_file, lenient)
    return _bigram_counts(lines, tok, window, workers)


def canonical(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class SimMatrix:
    """Sparse symmetric word-by-word matrix, one entry per unordered pair."""

    entries: dict
    mode: str = MEASURE_MODE
    measure: Measure | None = None
    threshold: float = 0.0
    meta: dict = field(default_factory=dict)
    config: str | None = None

    def __post_init__(self):
        if self.mode not in (MEASURE_MODE, COUNT_MODE):
            raise MatrixError(f"unknown matrix mode {self.mode!r}")
        for a, b in self.entries:
            if not a < b:
                raise MatrixError(f"entry ({a}, {b}) is not in canonical order")

    def __len__(self):
        return len(self.entries)

    @cached_property
    def vocab(self) -> tuple:
        words = set()
        for a, b in self.entries:
            words.add(a)
            words.add(b)
        return tuple(sorted(words))

    @cached_property
    def _rows(self) -> dict:
        rows = {}
        for (a, b), score in self.entries.items():
            rows.setdefault(a, {})[b] = score
            rows.setdefault(b, {})[a] = score
        return rows

    def row(self, word: str) -> dict:
        """First-order vector of ``word``; empty for words outside the vocabulary."""
        return dict(self._rows.get(word, {}))

    @property
    def total(self):
        return sum(self.entries.values())


def row(matrix: SimMatrix, word: str) -> dict:
    return matrix.row(word)


def build_count_matrix(corpus_file, tok: Tokenizer, window: int = 1, workers: int = 1,
                       lenient: bool = False, config: str | None = None) -> SimMatrix:
    lines, digest = read_corpus(corpus_file, lenient)
    counts = _bigram_counts(lines, tok, window, workers)
    entries = Counter()
    self_pairs = 0
    for (a, b), n in counts.items():
        if a == b:
            self_pairs += n
            continue
        entries[canonical(a, b)] += n
    meta = {"window": str(window), "self_pairs": str(self_pairs), "corpus": digest}
    return SimMatrix(dict(entries), COUNT_MODE, None, 0.0, meta, config)


class _PairScorer:
    """Best-sense scoring of word pairs with a per-build concept-pair cache."""

    def __init__(self, taxonomy, measure, ic, params):
        self.taxonomy = taxonomy
        self.measure = measure
        self.ic = ic
        self.params = params
        self._cache = {}

    def __call__(self, w1, w2):
        t = self.taxonomy
        best = None
        for s1 in sorted(t.senses(w1)):
            for s2 in sorted(t.senses(w2)):
                key = (s1, s2)
                score = self._cache.get(key)
                if score is None:
                    score = similarity(t, self.measure, s1, s2, self.ic, **self.params)
                    self._cache[key] = score
                if best is None or score > best:
                    best = score
        return best


_worker_scorer = None


def _init_worker(taxonomy, measure, ic, params):
    global _worker_scorer
    _worker_scorer = _PairScorer(taxonomy, measure, ic, params)


def _score_chunk(pairs):
    return [_worker_scorer(a, b) for a, b in pairs]


def check_threshold(measure: Measure, threshold: float):
    if not math.isfinite(threshold) or threshold < 0:
        raise MatrixError(f"threshold must be a finite value >= 0, got {threshold}")
    if measure.bounded and threshold > 1:
        raise MatrixError(f"threshold for {measure.value} must lie in [0, 1], got {threshold}")


def build_sim_matrix(corpus_file, tok: Tokenizer, taxonomy: Taxonomy, measure,
                     threshold: float = 0.0, ic: IcTable | None = None, window: int = 1,
                     workers: int = 1, lenient: bool = False, config: str | None = None,
                     **params) -> SimMatrix:
    """Score every distinct corpus bigram whose words both map to concepts.

    An entry is kept only when its best-sense score is strictly greater than
    ``threshold``.  Bigrams with an unmapped word are dropped and counted in
    ``meta['unmapped']``.
    """
    measure = measure if isinstance(measure, Measure) else Measure.parse(measure)
    threshold = float(threshold)
    check_threshold(measure, threshold)
    if measure.needs_ic and ic is None:
        raise MeasureError(f"measure {measure.value} requires an information content table")

    lines, digest = read_corpus(corpus_file, lenient)
    counts = _bigram_counts(lines, tok, window, workers)
    pairs = sorted({canonical(a, b) for a, b in counts if a != b})
    mapped, unmapped = [], 0
    for a, b in pairs:
        if taxonomy.senses(a) and taxonomy.senses(b):
            mapped.append((a, b))
        else:
            unmapped += 1

    if workers > 1 and len(mapped) > 1:
        scores = []
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(taxonomy, measure, ic, params)) as pool:
            for part in pool.map(_score_chunk, _chunks(mapped, workers * 4)):
                scores.extend(part)
    else:
        scorer = _PairScorer(taxonomy, measure, ic, params)
        scores = [scorer(a, b) for a, b in mapped]

    entries = {pair: s for pair, s in zip(mapped, scores) if s > threshold}
    meta = {"window": str(window), "unmapped": str(unmapped), "corpus": digest}
    return SimMatrix(entries, MEASURE_MODE, measure, threshold, meta, config)


def _format_score(matrix, score):
    return str(int(score)) if matrix.mode == COUNT_MODE else repr(float(score))


def _body_lines(matrix):
    return [f"{a}\t{b}\t{_format_score(matrix, matrix.entries[a, b])}\n"
            for a, b in sorted(matrix.entries)]


def _header(matrix):
    name = matrix.measure.value if matrix.measure is not None else "-"
    fields = [
        f"{FORMAT_TAG} {FORMAT_VERSION}",
        f"mode={matrix.mode}",
        f"measure={name}",
        f"threshold={float(matrix.threshold)!r}",
        f"vocab={len(matrix.vocab)}",
        f"entries={len(matrix.entries)}",
    ]
    fields += [f"{k}={v}" for k, v in sorted(matrix.meta.items())]
    return " ".join(fields) + "\n"


def dumps_matrix(matrix: SimMatrix) -> str:
    body = "".join(_body_lines(matrix))
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    config = f"#config {matrix.config}\n" if matrix.config else ""
    return _header(matrix) + config + body + f"#checksum={digest}\n"


def save_matrix(matrix: SimMatrix, out):
    Path(out).write_text(dumps_matrix(matrix), encoding="utf-8", newline="\n")


def loads_matrix(text: str, source: str = "<matrix>") -> SimMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith(FORMAT_TAG):
        raise MatrixError(f"{source}: malformed record: missing {FORMAT_TAG} header")
    head = lines[0].split()
    if len(head) < 2 or head[0] != FORMAT_TAG or head[1] != FORMAT_VERSION:
        raise MatrixError(f"{source}: version mismatch: {lines[0]!r}")
    try:
        fields = dict(tok.split("=", 1) for tok in head[2:])
    except ValueError:
        raise MatrixError(f"{source}: malformed record: header {lines[0]!r}") from None
    mode = fields.pop("mode", None)
    if mode not in (MEASURE_MODE, COUNT_MODE):
        raise MatrixError(f"{source}: version mismatch: unknown mode {mode!r}")
    name = fields.pop("measure", "-")
    if name == "-":
        measure = None
    else:
        try:
            measure = Measure(name)
        except ValueError:
            raise MatrixError(f"{source}: version mismatch: unknown measure {name!r}") from None
    try:
        threshold = float(fields.pop("threshold"))
        n_vocab = int(fields.pop("vocab"))
        n_entries = int(fields.pop("entries"))
    except (KeyError, ValueError):
        raise MatrixError(f"{source}: malformed record: header {lines[0]!r}") from None

    if len(lines) < 2 or not lines[-1].startswith("#checksum="):
        raise MatrixError(f"{source}: malformed record: missing checksum trailer (truncated file?)")
    expected = lines[-1][len("#checksum="):]

    config = None
    body = lines[1:-1]
    if body and body[0].startswith("#config "):
        config = body[0][len("#config "):]
        body = body[1:]

    entries = {}
    for i, line in enumerate(body, start=3 if config is not None else 2):
        parts = line.split("\t")
        try:
            a, b, raw = parts
            score = int(raw) if mode == COUNT_MODE else float(raw)
        except ValueError:
            raise MatrixError(f"{source}:{i}: malformed record {line!r}") from None
        if not a < b or (a, b) in entries:
            raise MatrixError(f"{source}:{i}: malformed record (pair order) {line!r}")
        entries[a, b] = score

    digest = hashlib.sha256("".join(l + "\n" for l in body).encode("utf-8")).hexdigest()
    if digest != expected:
        raise MatrixError(f"{source}: checksum mismatch")
    matrix = SimMatrix(entries, mode, measure, threshold, fields, config)
    if len(matrix.entries) != n_entries or len(matrix.vocab) != n_vocab:
        raise MatrixError(f"{source}: malformed record: header counts disagree with body")
    return matrix


def load_matrix(path) -> SimMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MatrixError(f"{path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise MatrixError(f"{path}: malformed record: invalid UTF-8 at byte {e.start}") from e
    return loads_matrix(text, str(path))


def filter_matrix(matrix: SimMatrix, threshold: float) -> SimMatrix:
    """Entries strictly above ``threshold``; the threshold may only be raised."""
    threshold = float(threshold)
    if matrix.mode != MEASURE_MODE:
        raise MatrixError("only measure-mode matrices can be thresholded")
    if threshold < matrix.threshold:
        raise MatrixError(f"cannot lower threshold {matrix.threshold} to {threshold}")
    check_threshold(matrix.measure, threshold)
    entries = {k: v for k, v in matrix.entries.items() if v > threshold}
    return SimMatrix(entries, matrix.mode, matrix.measure, threshold, dict(matrix.meta), matrix.config)
