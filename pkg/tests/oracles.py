"""Brute-force reference implementations used as test oracles.

Nothing here imports semrel: graphs are plain ``{node: set(parents)}``
dicts, closures are recomputed from scratch, shortest paths come from
Floyd-Warshall, and vectors are dense numpy arrays.
"""

import math
import re
from collections import Counter
from itertools import product
from pathlib import Path

import numpy as np


# ---------------------------------------------------------------- graphs

def parent_map(nodes, edges):
    """``edges`` are (parent, child) pairs."""
    parents = {n: set() for n in nodes}
    for p, c in edges:
        parents[c].add(p)
    return parents


def ancestors(parents, c):
    seen = {c}
    stack = [c]
    while stack:
        for p in parents[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def descendants(parents, c):
    return {d for d in parents if d != c and c in ancestors(parents, d)}


def find_root(parents):
    roots = [n for n, ps in parents.items() if not ps]
    assert len(roots) == 1
    return roots[0]


def depth(parents, c, mode="MAX"):
    """Node count of the shortest (or longest) path from the root, by enumerating every path."""
    def lengths(n):
        if not parents[n]:
            return [1]
        return [k + 1 for p in parents[n] for k in lengths(p)]
    return min(lengths(c)) if mode == "MIN" else max(lengths(c))


def depth_table(parents, mode="MAX"):
    # memoised variant for larger graphs; still a separate derivation from the BFS in semrel
    memo = {}
    pick = min if mode == "MIN" else max

    def d(n):
        if n not in memo:
            memo[n] = 1 if not parents[n] else 1 + pick(d(p) for p in parents[n])
        return memo[n]
    return {n: d(n) for n in parents}


def all_pairs_spath(parents):
    """Floyd-Warshall over the undirected hierarchy; returns node-count lengths."""
    nodes = sorted(parents)
    idx = {n: i for i, n in enumerate(nodes)}
    inf = float("inf")
    dist = [[inf] * len(nodes) for _ in nodes]
    for i in range(len(nodes)):
        dist[i][i] = 0
    for c, ps in parents.items():
        for p in ps:
            dist[idx[c]][idx[p]] = dist[idx[p]][idx[c]] = 1
    for k in range(len(nodes)):
        dk = dist[k]
        for i in range(len(nodes)):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(len(nodes)):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return {(a, b): dist[idx[a]][idx[b]] + 1 for a in nodes for b in nodes}


def lcs_set(parents, c1, c2):
    shared = ancestors(parents, c1) & ancestors(parents, c2)
    return {x for x in shared
            if not any(y != x and x in ancestors(parents, y) for y in shared)}


def leaves(parents):
    has_child = {p for ps in parents.values() for p in ps}
    return {n for n in parents if n not in has_child}


# ---------------------------------------------------------------- IC

def corpus_ic(parents, counts, smoothing):
    add = 1 if smoothing else 0
    c = {n: counts.get(n, 0) + add for n in parents}
    total = sum(c.values())
    out = {}
    for n in parents:
        mass = c[n]
        for d in descendants(parents, n):
            mass += c[d]
        out[n] = -math.log(mass / total) + 0.0
    return out


def intrinsic_ic(parents):
    all_leaves = leaves(parents)
    out = {}
    for n in parents:
        lv = len(descendants(parents, n) & all_leaves)
        subs = len(ancestors(parents, n))
        out[n] = -math.log((lv / subs + 1) / (len(all_leaves) + 1)) + 0.0
    out[find_root(parents)] = 0.0
    return out


# ---------------------------------------------------------------- measures, as printed

class Reference:
    """Direct transcription of the ten measures over naive graph helpers."""

    def __init__(self, parents, ic=None, k=2.0, epsilon=1e-4, depth_mode="MAX"):
        self.parents = parents
        self.root = find_root(parents)
        self.sp = all_pairs_spath(parents)
        self.depth = depth_table(parents, depth_mode)
        self.anc = {n: ancestors(parents, n) for n in parents}
        self.ic = ic
        self.k = k
        self.epsilon = epsilon

    def _lcs_deep(self, a, b):
        return max(lcs_set(self.parents, a, b), key=lambda x: (self.depth[x], x))

    def _lcs_ic(self, a, b):
        return max(lcs_set(self.parents, a, b), key=lambda x: (self.ic[x], x))

    def path(self, a, b):
        return 1 / self.sp[a, b]

    def wup(self, a, b):
        l = self._lcs_deep(a, b)
        return (2 * self.depth[l]) / (self.depth[a] + self.depth[b])

    def zhong(self, a, b):
        m = lambda c: self.k ** (-self.depth[c])
        l = self._lcs_deep(a, b)
        return (2 * m(l)) / (m(a) + m(b))

    def pks(self, a, b):
        l = self._lcs_deep(a, b)
        return -math.log(self.sp[l, self.root] / sum(self.sp[l, x] for x in (a, b, self.root)))

    def cmatch(self, a, b):
        return len(self.anc[a] & self.anc[b]) / len(self.anc[a] | self.anc[b])

    def batet(self, a, b):
        u = len(self.anc[a] | self.anc[b])
        i = len(self.anc[a] & self.anc[b])
        if u - i == 0:
            return -math.log2(1 / (u + 1))
        return -math.log2((u - i) / u)

    def res(self, a, b):
        return self.ic[self._lcs_ic(a, b)]

    def lin(self, a, b):
        d = self.ic[a] + self.ic[b]
        return 0.0 if d == 0 else (2 * self.ic[self._lcs_ic(a, b)]) / d

    def jcn(self, a, b):
        d = self.ic[a] + self.ic[b] - 2 * self.ic[self._lcs_ic(a, b)]
        return 1 / self.epsilon if d <= 0 else 1 / d

    def faith(self, a, b):
        l = self.ic[self._lcs_ic(a, b)]
        d = self.ic[a] + self.ic[b] - l
        return 0.0 if d <= 0 else l / d

    def __call__(self, name, a, b):
        return getattr(self, name)(a, b)


MEASURES = ["path", "wup", "zhong", "pks", "cmatch", "batet", "res", "lin", "jcn", "faith"]


# ---------------------------------------------------------------- statistics

def average_ranks(xs):
    return [sum(1 for y in xs if y < x) + (sum(1 for y in xs if y == x) + 1) / 2 for x in xs]


def pearson(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    return sxy / math.sqrt(sxx * syy)


def spearman(xs, ys):
    return pearson(average_ranks(xs), average_ranks(ys))


def fisher(r1, n1, r2, n2):
    import mpmath
    mpmath.mp.dps = 50
    z = (mpmath.atanh(r1) - mpmath.atanh(r2)) / mpmath.sqrt(mpmath.mpf(1) / (n1 - 3) + mpmath.mpf(1) / (n2 - 3))
    p = 2 * (1 - mpmath.ncdf(abs(z)))
    return float(z), float(p)


# ---------------------------------------------------------------- full relatedness pipeline

def tokens(text):
    return re.findall(r"[^\W_]+", text.lower())


def read_tsv(path):
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            rows.append(line.split("\t"))
    return rows


class Pipeline:
    """Dense-vector re-derivation of the super-gloss / second-order vector method."""

    def __init__(self, directory):
        d = Path(directory)
        self.nodes = [r[0] for r in read_tsv(d / "concepts.tsv")]
        links = {n: set() for n in self.nodes}
        hier = []
        for src, rel, tgt in read_tsv(d / "relations.tsv"):
            links[src].add(tgt)
            links[tgt].add(src)
            if rel == "PAR":
                hier.append((src, tgt))
            elif rel == "CHD":
                hier.append((tgt, src))
        self.links = links
        self.parents = parent_map(self.nodes, hier)
        self.defs = {}
        for cid, text in read_tsv(d / "definitions.tsv"):
            self.defs.setdefault(cid, []).append(text)
        self.index = {}
        for term, cid in read_tsv(d / "index.tsv"):
            self.index.setdefault(term.lower(), set()).add(cid)
        self.lines = (d / "corpus.txt").read_text(encoding="utf-8").splitlines()

    def bigrams(self):
        out = Counter()
        for line in self.lines:
            toks = tokens(line)
            for i in range(len(toks) - 1):
                out[toks[i], toks[i + 1]] += 1
        return out

    def sim_matrix(self, reference, measure, threshold):
        """Dense symmetric matrix of best-sense scores for bigram word pairs."""
        pairs = {tuple(sorted(p)) for p in self.bigrams() if p[0] != p[1]}
        scored = {}
        for a, b in pairs:
            if a in self.index and b in self.index:
                s = max(reference(measure, x, y) for x, y in product(self.index[a], self.index[b]))
                if s > threshold:
                    scored[a, b] = s
        return self._dense(scored)

    def count_matrix(self):
        scored = Counter()
        for (a, b), n in self.bigrams().items():
            if a != b:
                scored[tuple(sorted((a, b)))] += n
        return self._dense(scored)

    @staticmethod
    def _dense(scored):
        vocab = sorted({w for p in scored for w in p})
        idx = {w: i for i, w in enumerate(vocab)}
        m = np.zeros((len(vocab), len(vocab)))
        for (a, b), s in scored.items():
            m[idx[a], idx[b]] = m[idx[b], idx[a]] = s
        return m, idx

    def gloss(self, c):
        toks = []
        for text in self.defs.get(c, []):
            toks += tokens(text)
        for n in sorted(self.links[c] - {c}):
            for text in self.defs.get(n, []):
                toks += tokens(text)
        return toks

    def vector(self, c, dense):
        m, idx = dense
        rows = [m[idx[t]] for t in self.gloss(c) if t in idx and m[idx[t]].any()]
        if not rows:
            return None
        return np.mean(rows, axis=0)

    def relate(self, t1, t2, dense):
        best = None
        for a, b in product(self.index.get(t1, ()), self.index.get(t2, ())):
            v1, v2 = self.vector(a, dense), self.vector(b, dense)
            if v1 is None or v2 is None:
                continue
            s = float(v1 @ v2 / (np.linalg.norm(v1) * np.linalg.norm(v2)))
            best = s if best is None else max(best, s)
        return best

    def lesk(self, t1, t2):
        return max(_lesk(self.gloss(a), self.gloss(b))
                   for a, b in product(self.index[t1], self.index[t2]))

    def o1(self, t1, t2):
        best = 0.0
        for a, b in product(self.index[t1], self.index[t2]):
            ca, cb = Counter(self.gloss(a)), Counter(self.gloss(b))
            words = sorted(set(ca) | set(cb))
            va = np.array([ca[w] for w in words], float)
            vb = np.array([cb[w] for w in words], float)
            best = max(best, float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb))))
        return best


def _lesk(g1, g2):
    """Greedy longest-first overlap extraction by scanning every span length."""
    a, b = sorted((list(g1), list(g2)))
    used_a, used_b = [False] * len(a), [False] * len(b)
    score = 0
    for n in range(min(len(a), len(b)), 0, -1):
        found = True
        while found:
            found = False
            for i in range(len(a) - n + 1):
                if any(used_a[i:i + n]):
                    continue
                for j in range(len(b) - n + 1):
                    if not any(used_b[j:j + n]) and a[i:i + n] == b[j:j + n]:
                        used_a[i:i + n] = [True] * n
                        used_b[j:j + n] = [True] * n
                        score += n * n
                        found = True
                        break
                if found:
                    break
    return float(score)
