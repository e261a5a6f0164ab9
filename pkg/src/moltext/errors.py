"""Exception taxonomy shared across the package.

Every error raised by moltext derives from MoltextError so callers (and the
CLI exit-code mapping) can distinguish our failures from genuine bugs.
"""

from __future__ import annotations


class MoltextError(Exception):
    """Base class for all moltext errors."""


# --- corpus files ---------------------------------------------------------

class DatasetError(MoltextError):
    pass


class MalformedRow(DatasetError):
    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(f"malformed row at line {line_no}" + (f": {message}" if message else ""))


class MalformedLine(DatasetError):
    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(f"malformed line {line_no}" + (f": {message}" if message else ""))


class DuplicateId(DatasetError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"duplicate record id {record_id!r}")


class EmptyFile(DatasetError):
    pass


class EmptyCorpus(DatasetError):
    pass


# --- SMILES ---------------------------------------------------------------

class SmilesError(MoltextError):
    pass


class GrammarError(SmilesError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"SMILES grammar error at position {position}: {message}")


class UnclosedRing(SmilesError):
    def __init__(self, label: int):
        self.label = label
        super().__init__(f"ring closure {label} opened but never closed")


class UnmatchedParen(SmilesError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unmatched parenthesis at position {position}")


class UnknownElement(SmilesError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"unknown element symbol {token!r}")


class InvalidGraph(SmilesError):
    pass


class InvalidGroundTruth(MoltextError):
    def __init__(self, record_id: str, message: str = ""):
        self.record_id = record_id
        super().__init__(f"ground-truth SMILES for {record_id!r} is invalid"
                         + (f": {message}" if message else ""))


# --- fingerprints ---------------------------------------------------------

class FamilyMismatch(MoltextError):
    pass


# --- text metrics ---------------------------------------------------------

class ModeMismatch(MoltextError):
    pass


class EmptySequence(MoltextError):
    pass


class EmptyReference(MoltextError):
    pass


# --- augmentation pipeline ------------------------------------------------

class AugmentError(MoltextError):
    pass


class UnresolvedPlaceholder(AugmentError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"template placeholder {{{name}}} cannot be resolved")


class BudgetExhausted(AugmentError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"request budget of {budget} exhausted")


class AllProvidersFailed(AugmentError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"every provider round failed for record {record_id!r}")


class CacheCorrupt(AugmentError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"cache entry {path} is not readable JSON")


# --- evaluation harness ---------------------------------------------------

class EvalError(MoltextError):
    pass


class MissingPrediction(EvalError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"no prediction for test record {record_id!r}")


class DuplicatePrediction(EvalError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"more than one prediction for record {record_id!r}")


class UnexpectedPrediction(EvalError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"prediction for {record_id!r} which is not in the test split")


class ScorerFailed(EvalError):
    def __init__(self, exit_code: int, stderr_tail: str):
        self.exit_code = exit_code
        self.stderr_tail = stderr_tail
        super().__init__(f"external scorer exited with {exit_code}: {stderr_tail}")


class MalformedScorerOutput(EvalError):
    pass
