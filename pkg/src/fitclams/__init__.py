"""Frequency-controlled minimal-pair benchmarks for subject-verb agreement.

The package covers the full evaluation loop: corpus statistics, BPE
tokenizer training, a Kneser-Ney n-gram scorer, shared-vocabulary lexicon
construction with logarithmic frequency binning, minimal-pair generation
over seven agreement paradigms, probability-difference scoring, and the
frequency regression analysis.
"""

__version__ = "0.1.0"
