class ScoringError(ValueError):
    """A term pair that cannot be scored; ``status`` names the reason."""

    status = "error"


class UnmappableTerm(ScoringError):
    status = "unmappable"

    def __init__(self, term):
        super().__init__(f"unmappable term {term!r}")
        self.term = term


class EmptySuperGloss(ScoringError):
    status = "empty_gloss"


class NoContextualSignal(ScoringError):
    status = "no_signal"
