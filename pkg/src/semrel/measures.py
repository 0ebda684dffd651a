"""Taxonomy similarity measures: path, feature and information-content families."""

from __future__ import annotations

import enum
import math

from .errors import UnmappableTerm
from .ic import IcTable
from .taxonomy import Taxonomy, TaxonomyError


class MeasureError(ValueError):
    pass


class Measure(str, enum.Enum):
    PATH = "path"
    WUP = "wup"
    ZHONG = "zhong"
    PKS = "pks"
    CMATCH = "cmatch"
    BATET = "batet"
    RES = "res"
    LIN = "lin"
    JCN = "jcn"
    FAITH = "faith"

    @property
    def needs_ic(self) -> bool:
        return self in IC_MEASURES

    @property
    def bounded(self) -> bool:
        """True when scores are confined to [0, 1]."""
        return self in BOUNDED_MEASURES

    @classmethod
    def parse(cls, name) -> "Measure":
        try:
            return cls(str(name).lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise MeasureError(f"unknown measure {name!r}; valid names: {valid}") from None


IC_MEASURES = frozenset({Measure.RES, Measure.LIN, Measure.JCN, Measure.FAITH})
BOUNDED_MEASURES = frozenset({Measure.PATH, Measure.WUP, Measure.CMATCH, Measure.LIN, Measure.FAITH})

JCN_EPSILON = 1e-4
ZHONG_K = 2.0


def _deepest_lcs(t: Taxonomy, c1, c2):
    # ties broken by id so the choice is reproducible
    return max(t.lcs_set(c1, c2), key=lambda a: (t.depth(a), a))


def _richest_lcs(t: Taxonomy, ic: IcTable, c1, c2):
    return max(t.lcs_set(c1, c2), key=lambda a: (ic[a], a))


def path(t: Taxonomy, c1, c2) -> float:
    return 1.0 / t.spath(c1, c2)


def wup(t: Taxonomy, c1, c2) -> float:
    lcs = _deepest_lcs(t, c1, c2)
    return 2.0 * t.depth(lcs) / (t.depth(c1) + t.depth(c2))


def zhong(t: Taxonomy, c1, c2, k: float = ZHONG_K) -> float:
    """Zhong's milestone ratio as usually printed; note it grows for *less* similar pairs."""
    lcs = _deepest_lcs(t, c1, c2)
    m = lambda c: k ** -t.depth(c)
    return 2.0 * m(lcs) / (m(c1) + m(c2))


def pks(t: Taxonomy, c1, c2) -> float:
    lcs = _deepest_lcs(t, c1, c2)
    to_root = t.spath(lcs, t.root)
    total = t.spath(lcs, c1) + t.spath(lcs, c2) + to_root
    return -math.log(to_root / total) + 0.0


def cmatch(t: Taxonomy, c1, c2) -> float:
    a1, a2 = t.ancestors(c1), t.ancestors(c2)
    return len(a1 & a2) / len(a1 | a2)


def batet(t: Taxonomy, c1, c2) -> float:
    a1, a2 = t.ancestors(c1), t.ancestors(c2)
    union = len(a1 | a2)
    diff = union - len(a1 & a2)
    if diff == 0:
        # identical feature sets; smoothed so the value stays finite and maximal
        return math.log2(union + 1)
    return -math.log2(diff / union) + 0.0


def res(t: Taxonomy, ic: IcTable, c1, c2) -> float:
    return ic[_richest_lcs(t, ic, c1, c2)]


def lin(t: Taxonomy, ic: IcTable, c1, c2) -> float:
    shared = ic[_richest_lcs(t, ic, c1, c2)]
    denom = ic[c1] + ic[c2]
    if denom == 0:
        return 0.0
    return 2.0 * shared / denom


def jcn(t: Taxonomy, ic: IcTable, c1, c2, epsilon: float = JCN_EPSILON) -> float:
    shared = ic[_richest_lcs(t, ic, c1, c2)]
    distance = ic[c1] + ic[c2] - 2.0 * shared
    if distance <= 0:
        return 1.0 / epsilon
    return 1.0 / distance


def faith(t: Taxonomy, ic: IcTable, c1, c2) -> float:
    shared = ic[_richest_lcs(t, ic, c1, c2)]
    denom = ic[c1] + ic[c2] - shared
    if denom <= 0:
        return 0.0
    return shared / denom


_STRUCTURAL = {
    Measure.PATH: path,
    Measure.WUP: wup,
    Measure.PKS: pks,
    Measure.CMATCH: cmatch,
    Measure.BATET: batet,
}
_IC_BASED = {
    Measure.RES: res,
    Measure.LIN: lin,
    Measure.FAITH: faith,
}


def similarity(t: Taxonomy, measure, c1: str, c2: str, ic: IcTable | None = None,
               k: float = ZHONG_K, epsilon: float = JCN_EPSILON) -> float:
    """Score two concepts with the named measure.

    ``k`` only affects zhong, ``epsilon`` only jcn (returned as 1/epsilon when
    the jcn distance is zero).
    """
    m = measure if isinstance(measure, Measure) else Measure.parse(measure)
    for c in (c1, c2):
        if c not in t:
            raise TaxonomyError(f"unknown ConceptId {c}")
    if m in _STRUCTURAL:
        return _STRUCTURAL[m](t, c1, c2)
    if m is Measure.ZHONG:
        return zhong(t, c1, c2, k)
    if ic is None:
        raise MeasureError(f"measure {m.value} requires an information content table")
    if m is Measure.JCN:
        return jcn(t, ic, c1, c2, epsilon)
    return _IC_BASED[m](t, ic, c1, c2)


def best_sense_similarity(t: Taxonomy, measure, w1: str, w2: str,
                          ic: IcTable | None = None, **params) -> float:
    """Maximum similarity over all sense pairs of two surface terms."""
    senses1, senses2 = t.senses(w1), t.senses(w2)
    if not senses1:
        raise UnmappableTerm(w1)
    if not senses2:
        raise UnmappableTerm(w2)
    return max(
        similarity(t, measure, s1, s2, ic, **params)
        for s1 in sorted(senses1) for s2 in sorted(senses2)
    )
