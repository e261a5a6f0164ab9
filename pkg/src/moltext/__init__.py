"""moltext: molecule-caption dataset tooling.

Corpus loading and splitting, SMILES validity and canonicalization,
fingerprint Tanimoto metrics, sequence metrics (BLEU, ROUGE, METEOR,
Levenshtein), an LLM caption-rewriting pipeline, and an evaluation harness
for molecule generation and captioning predictions.
"""

__version__ = "0.1.0"
