"""Taxonomy-based semantic similarity and similarity-weighted second-order relatedness."""

__version__ = "0.1.0"

from .errors import EmptySuperGloss, NoContextualSignal, ScoringError, UnmappableTerm
from .evaluation import (
    EvalResult, RefStandard, evaluate, fisher_r_to_z, load_gold, spearman, threshold_sweep,
)
from .ic import FreqTable, IcTable, corpus_ic, intrinsic_ic, load_freq, load_ic, save_ic
from .matrix import (
    SimMatrix, build_count_matrix, build_sim_matrix, extract_bigrams, load_matrix, save_matrix,
)
from .measures import Measure, best_sense_similarity, similarity
from .relatedness import (
    SecondOrderVector, SuperGloss, build_supergloss, cosine, lesk_score, o1_score, o2_score,
    relate_pair, second_order_vector,
)
from .taxonomy import HierarchyConfig, Relation, Taxonomy, TaxonomyError, load_taxonomy
from .text import Tokenizer

from pathlib import Path as _Path

# the bundled six-concept example (taxonomy, corpus, frequencies, gold pairs)
FIXTURE_DIR = _Path(__file__).parent / "data" / "fixture"
