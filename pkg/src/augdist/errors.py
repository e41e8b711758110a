"""Exception types shared across the toolkit."""


class AugDistError(Exception):
    """Base class for all toolkit errors."""


class DotSyntaxError(AugDistError):
    """Malformed DOT text."""


class SchemaError(AugDistError):
    """Structurally valid DOT that violates the usage-graph attribute schema."""


class EmptyGraphError(AugDistError):
    """Operation requires a graph with at least one node."""


class GedTimeoutError(AugDistError):
    """Edit search hit its deadline before finding any complete edit path."""


class DegenerateStructureError(AugDistError):
    """Similarity iteration produced a zero update (e.g. an edgeless graph)."""


class InsufficientDataError(AugDistError):
    """Not enough computable entries remain to evaluate a rule."""


class CorpusLayoutError(AugDistError):
    """Corpus directory does not match the expected on-disk layout."""
