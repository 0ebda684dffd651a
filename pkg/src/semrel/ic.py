"""Information content from corpus frequencies or from taxonomy structure."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .taxonomy import Taxonomy, TaxonomyError

log = logging.getLogger(__name__)


class ICError(ValueError):
    pass


class ICSource(str, enum.Enum):
    CORPUS = "CORPUS"
    INTRINSIC = "INTRINSIC"


@dataclass(frozen=True)
class FreqTable:
    counts: Mapping[str, int]
    total_n: int = field(default=None)

    def __post_init__(self):
        counts = dict(self.counts)
        for cid, n in counts.items():
            if not isinstance(n, int) or n < 0:
                raise ICError(f"count for {cid} must be a non-negative integer, got {n!r}")
        total = sum(counts.values())
        if self.total_n is not None and self.total_n != total:
            raise ICError(f"total_n={self.total_n} does not match sum of counts {total}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total_n", total)


def load_freq(path, taxonomy: Taxonomy | None = None, strict: bool = False) -> FreqTable:
    """Read ``concept_id<TAB>count`` lines.

    Concepts unknown to ``taxonomy`` raise under ``strict``, otherwise they are
    logged and skipped.
    """
    path = Path(path)
    counts = {}
    unknown = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ICError(f"{path}: {e.strerror or e}") from e
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        try:
            cid, n = fields[0].strip(), int(fields[1])
            if len(fields) != 2 or n < 0:
                raise ValueError
        except (IndexError, ValueError):
            raise ICError(f"{path}:{lineno}: malformed line {line!r}") from None
        if taxonomy is not None and cid not in taxonomy:
            if strict:
                raise ICError(f"{path}:{lineno}: ConceptId {cid} not in taxonomy")
            unknown.append(cid)
            continue
        counts[cid] = counts.get(cid, 0) + n
    if unknown:
        log.warning("skipped %d concepts absent from the taxonomy (first: %s)",
                    len(unknown), unknown[0])
    return FreqTable(counts)


@dataclass(frozen=True)
class IcTable:
    ic: Mapping[str, float]
    source: ICSource
    log_base: float = math.e
    smoothing: bool = False

    def __getitem__(self, cid):
        try:
            return self.ic[cid]
        except KeyError:
            raise TaxonomyError(f"no information content for {cid}") from None

    def __contains__(self, cid):
        return cid in self.ic

    def __len__(self):
        return len(self.ic)

    @property
    def max_ic(self) -> float:
        return max(self.ic.values())


def _neg_log(p, base):
    value = -math.log(p) if base == math.e else -math.log(p, base)
    return value + 0.0  # no -0.0


def corpus_ic(taxonomy: Taxonomy, freq: FreqTable, smoothing: bool = True,
              strict: bool = False, log_base: float = math.e) -> IcTable:
    """IC(c) = -log P(c*), with P(c*) pooling the counts of c and its descendant set.

    With ``smoothing`` every concept count is incremented by one and the total
    grows by the number of concepts, so every concept has a finite IC.
    """
    unknown = [c for c in freq.counts if c not in taxonomy]
    if unknown:
        if strict:
            raise ICError(f"frequency table mentions unknown concepts: {', '.join(sorted(unknown)[:10])}")
        log.warning("ignoring %d concepts absent from the taxonomy", len(unknown))
    counts = {c: freq.counts.get(c, 0) + (1 if smoothing else 0) for c in taxonomy.concepts}
    total = sum(counts.values())
    if total <= 0:
        raise ICError("total frequency must be positive")

    ic = {}
    for c in taxonomy.concepts:
        mass = counts[c] + sum(counts[d] for d in taxonomy.descendants(c))
        if mass == 0:
            raise ICError(f"zero probability mass for {c}; enable smoothing")
        ic[c] = _neg_log(mass / total, log_base)
    ic[taxonomy.root] = 0.0
    return IcTable(ic, ICSource.CORPUS, log_base, smoothing)


def intrinsic_ic(taxonomy: Taxonomy, log_base: float = math.e) -> IcTable:
    ic = {}
    for c in taxonomy.concepts:
        leaves, subsumers, max_leaves = taxonomy.leaf_stats(c)
        ic[c] = _neg_log((leaves / subsumers + 1) / (max_leaves + 1), log_base)
    # only a single-node taxonomy needs this: its root is also a leaf
    ic[taxonomy.root] = 0.0
    return IcTable(ic, ICSource.INTRINSIC, log_base, False)


def _base_name(base):
    return "e" if base == math.e else repr(base)


def dumps_ic(table: IcTable, config_line: str | None = None) -> str:
    lines = [f"#source={table.source.value} log_base={_base_name(table.log_base)} "
             f"smoothing={'on' if table.smoothing else 'off'}"]
    if config_line:
        lines.append(f"#config {config_line}")
    for cid in sorted(table.ic):
        lines.append(f"{cid}\t{table.ic[cid]:.10g}")
    return "\n".join(lines) + "\n"


def save_ic(table: IcTable, path, config_line: str | None = None):
    Path(path).write_text(dumps_ic(table, config_line), encoding="utf-8")


def load_ic(path) -> IcTable:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ICError(f"{path}: {e.strerror or e}") from e
    if not lines or not lines[0].startswith("#source="):
        raise ICError(f"{path}: missing '#source=' header")
    meta = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    base = math.e if meta.get("log_base", "e") == "e" else float(meta["log_base"])
    ic = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            cid, value = line.split("\t")
            ic[cid] = float(value)
        except ValueError:
            raise ICError(f"{path}:{lineno}: malformed line {line!r}") from None
    return IcTable(ic, ICSource(meta["source"]), base, meta.get("smoothing") == "on")
