"""SentiWordNet features, lexicon baselines and evolved feature weights for
cross-domain review sentiment classification."""

__version__ = "0.1.0"
