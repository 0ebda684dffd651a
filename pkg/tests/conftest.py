import random
import sys
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from semrel import FIXTURE_DIR, Taxonomy, Tokenizer  # noqa: E402
from semrel.taxonomy import load_taxonomy_dir  # noqa: E402

WORDS = ("acid lung heart valve tube cell blood flow gland nerve bone skin renal "
         "duct liver vessel fibre tissue organ cavity").split()


def random_dag(rng: random.Random, n_nodes=None, max_parents=3):
    """A single-rooted DAG; returns (concept ids, [(parent, child)])."""
    n = n_nodes or rng.randint(2, 50)
    ids = [f"C{i:03d}" for i in range(n)]
    edges = []
    for i in range(1, n):
        for p in rng.sample(range(i), rng.randint(1, min(max_parents, i))):
            edges.append((ids[p], ids[i]))
    return ids, edges


def random_taxonomy(rng: random.Random, n_nodes=None, with_text=False):
    ids, edges = random_dag(rng, n_nodes)
    rels = [(p, "PAR", c) for p, c in edges]
    definitions, index = {}, {}
    if with_text:
        for c in ids:
            if rng.random() < 0.85:
                definitions[c] = [" ".join(rng.choices(WORDS, k=rng.randint(2, 8)))]
        for i, c in enumerate(ids):
            index.setdefault(f"term{i}", set()).add(c)
            if rng.random() < 0.3:
                index.setdefault(f"term{rng.randrange(len(ids))}", set()).add(c)
        for w in WORDS:
            index.setdefault(w, set()).add(rng.choice(ids))
    t = Taxonomy({c: c.lower() for c in ids}, rels, definitions, index)
    return t, ids, edges


@pytest.fixture
def fixture_taxonomy():
    return load_taxonomy_dir(FIXTURE_DIR)


@pytest.fixture
def tok():
    return Tokenizer()


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


# acceptance criteria report, printed at the end of the run

_ACCEPTANCE = {}


@contextmanager
def _criterion(cid, description):
    try:
        yield
    except BaseException:
        _ACCEPTANCE[cid] = ("FAIL", description)
        raise
    _ACCEPTANCE.setdefault(cid, ("PASS", description))


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE, key=lambda c: int(c[2:])):
        status, description = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"{status}  {cid}  {description}")
