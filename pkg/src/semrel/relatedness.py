"""Super-gloss relatedness: second-order vectors and the gloss-based baselines."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .matrix import COUNT_MODE, SimMatrix
from .errors import EmptySuperGloss, NoContextualSignal, UnmappableTerm
from .taxonomy import Relation, Taxonomy
from .text import Tokenizer


@dataclass(frozen=True)
class SuperGloss:
    concept: str
    tokens: tuple
    sources: tuple = ()

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class SecondOrderVector:
    weights: dict = field(default_factory=dict)
    contributing: int = 0

    @property
    def norm(self) -> float:
        return math.sqrt(math.fsum(v * v for v in self.weights.values()))


_REL_ORDER = list(Relation)


def build_supergloss(t: Taxonomy, tok: Tokenizer, c: str) -> SuperGloss:
    """Own definitions first, then those of every linked concept in id order.

    A neighbour linked by several relation kinds contributes its definitions
    once; its first kind (PAR, CHD, RB, RN, TERM order) is recorded.
    """
    neighbours = t.neighbors(c)
    tokens = []
    sources = []
    for text in t.definitions.get(c, []):
        tokens.extend(tok(text))
    if c in t.definitions:
        sources.append((c, None))
    for n in sorted(neighbours):
        texts = t.definitions.get(n)
        if not texts:
            continue
        kind = min(neighbours[n], key=_REL_ORDER.index)
        sources.append((n, kind))
        for text in texts:
            tokens.extend(tok(text))
    if not tokens:
        raise EmptySuperGloss(f"empty super-gloss for {c}")
    return SuperGloss(c, tuple(tokens), tuple(sources))


def second_order_vector(g: SuperGloss, matrix: SimMatrix) -> SecondOrderVector:
    """Mean of the matrix rows of the gloss tokens.

    Repeated tokens count repeatedly; tokens without a row are left out of
    both the sum and the divisor.
    """
    sums = {}
    contributing = 0
    for token in g.tokens:
        r = matrix.row(token)
        if not r:
            continue
        contributing += 1
        for w, s in r.items():
            sums.setdefault(w, []).append(s)
    if contributing == 0:
        raise NoContextualSignal(f"no contextual signal for {g.concept}")
    weights = {w: math.fsum(v) / contributing for w, v in sorted(sums.items())}
    return SecondOrderVector(weights, contributing)


def _dict_cosine(v1: dict, v2: dict) -> float:
    if len(v2) < len(v1):
        v1, v2 = v2, v1
    dot = math.fsum(x * v2[w] for w, x in v1.items() if w in v2)
    n1 = math.fsum(x * x for x in v1.values())
    n2 = math.fsum(x * x for x in v2.values())
    if n1 == 0 or n2 == 0:
        raise NoContextualSignal("zero-norm vector")
    return min(1.0, max(0.0, dot / math.sqrt(n1 * n2)))


def cosine(v1: SecondOrderVector, v2: SecondOrderVector) -> float:
    if v1.contributing == 0 or v2.contributing == 0:
        raise NoContextualSignal("no contextual signal")
    return _dict_cosine(v1.weights, v2.weights)


def score_terms(t: Taxonomy, term1: str, term2: str,
                concept_score: Callable[[str, str], float]) -> float:
    """Max of ``concept_score`` over the sense pairs of two surface terms.

    Sense pairs that fail are skipped; if all fail the first failure is
    raised, with unmappable and empty-gloss failures reported ahead of a lack
    of signal.
    """
    senses1, senses2 = t.senses(term1), t.senses(term2)
    if not senses1:
        raise UnmappableTerm(term1)
    if not senses2:
        raise UnmappableTerm(term2)
    best = None
    errors = []
    for s1 in sorted(senses1):
        for s2 in sorted(senses2):
            try:
                score = concept_score(s1, s2)
            except (EmptySuperGloss, NoContextualSignal) as e:
                errors.append(e)
                continue
            if best is None or score > best:
                best = score
    if best is None:
        errors.sort(key=lambda e: isinstance(e, NoContextualSignal))
        raise errors[0]
    return best


class _GlossCache:
    def __init__(self, t, tok):
        self.t, self.tok = t, tok
        self._glosses = {}

    def __call__(self, c):
        if c not in self._glosses:
            try:
                self._glosses[c] = build_supergloss(self.t, self.tok, c)
            except EmptySuperGloss as e:
                self._glosses[c] = e
        g = self._glosses[c]
        if isinstance(g, Exception):
            raise g
        return g


def _vector_pair_scorer(t, tok, matrix):
    glosses = _GlossCache(t, tok)
    vectors = {}

    def vector(c):
        if c not in vectors:
            try:
                vectors[c] = second_order_vector(glosses(c), matrix)
            except NoContextualSignal as e:
                vectors[c] = e
        v = vectors[c]
        if isinstance(v, Exception):
            raise v
        return v

    return lambda c1, c2: cosine(vector(c1), vector(c2))


def relate_pair(t: Taxonomy, tok: Tokenizer, matrix: SimMatrix, term1: str, term2: str) -> float:
    """Cosine of the second-order vectors of two terms' super-glosses (best sense pair)."""
    return score_terms(t, term1, term2, _vector_pair_scorer(t, tok, matrix))


def o2_score(t: Taxonomy, tok: Tokenizer, count_matrix: SimMatrix, term1: str, term2: str) -> float:
    """The same pipeline over an unweighted co-occurrence count matrix."""
    if count_matrix.mode != COUNT_MODE:
        raise ValueError("o2 scoring requires a count-mode matrix")
    return relate_pair(t, tok, count_matrix, term1, term2)


def _overlaps(a: list, b: list):
    """Greedy maximal shared runs, longest first, each position used once."""
    used_a = [False] * len(a)
    used_b = [False] * len(b)
    found = []
    while True:
        best_len, best_i, best_j = 0, -1, -1
        prev = [0] * (len(b) + 1)
        for i in range(len(a)):
            cur = [0] * (len(b) + 1)
            if not used_a[i]:
                ai = a[i]
                for j in range(len(b)):
                    if not used_b[j] and ai == b[j]:
                        n = prev[j] + 1
                        cur[j + 1] = n
                        if n > best_len:
                            best_len, best_i, best_j = n, i, j
            prev = cur
        if best_len == 0:
            return found
        start_a, start_b = best_i - best_len + 1, best_j - best_len + 1
        for k in range(best_len):
            used_a[start_a + k] = used_b[start_b + k] = True
        found.append(tuple(a[start_a:best_i + 1]))


def lesk_score(g1: SuperGloss, g2: SuperGloss) -> float:
    """Sum of squared lengths of the shared word runs of two glosses."""
    a, b = sorted((g1.tokens, g2.tokens))  # greedy ties must not depend on argument order
    return float(sum(len(o) ** 2 for o in _overlaps(list(a), list(b))))


def o1_score(g1: SuperGloss, g2: SuperGloss) -> float:
    """Cosine of the token-frequency vectors of two glosses."""
    return _dict_cosine(Counter(g1.tokens), Counter(g2.tokens))


def lesk_pair(t: Taxonomy, tok: Tokenizer, term1: str, term2: str) -> float:
    glosses = _GlossCache(t, tok)
    return score_terms(t, term1, term2, lambda a, b: lesk_score(glosses(a), glosses(b)))


def o1_pair(t: Taxonomy, tok: Tokenizer, term1: str, term2: str) -> float:
    glosses = _GlossCache(t, tok)
    return score_terms(t, term1, term2, lambda a, b: o1_score(glosses(a), glosses(b)))
