"""Information-theoretic time-series features.

Thin Python layer over the compiled _entropy_kit module: Markov-chain
entropies, neural entropy-production estimation (NEEP), signal-entropy
variants (ApEn, SampEn, FuzzyEn, IncrEn, DispEn, PhEn, SlopEn),
mutual-information feature selection, and a repeated-holdout harness.
"""

try:
    from ._entropy_kit import *  # packaged wheel layout
    from ._entropy_kit import __version__
except ImportError:  # in-tree builds put the module next to the package
    from _entropy_kit import *
    from _entropy_kit import __version__
