from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

_TOKEN = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class Tokenizer:
    """Splits text into maximal letter/digit runs, lowercased by default."""

    lowercase: bool = True
    stoplist: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        stop = frozenset(w.lower() if self.lowercase else w for w in self.stoplist)
        object.__setattr__(self, "stoplist", stop)

    def __call__(self, text: str) -> list[str]:
        if self.lowercase:
            text = text.lower()
        tokens = _TOKEN.findall(text)
        if self.stoplist:
            tokens = [t for t in tokens if t not in self.stoplist]
        return tokens


def load_stoplist(path) -> frozenset:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.update(line.split())
    return frozenset(words)
