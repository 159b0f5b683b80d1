"""Typed error hierarchy shared by all modules.

Three categories drive the CLI exit-code mapping:
  IoFailure      -> exit 2 (OS-level read/write problems)
  FormatError    -> exit 3 (malformed files: bad magic, truncation, schema)
  ContractError  -> exit 4 (valid files / calls violating a precondition)
"""


class OodscoreError(Exception):
    """Base class for all errors raised by this package."""


class IoFailure(OodscoreError):
    pass


class FormatError(OodscoreError):
    pass


class ContractError(OodscoreError):
    pass


# --- container / CSV format errors -----------------------------------------

class BadMagic(FormatError):
    def __init__(self, found: bytes):
        super().__init__(f"bad magic at byte offset 0: expected b'FSET1', found {found!r}")
        self.found = found


class TruncatedFile(FormatError):
    def __init__(self, needed: int, available: int, offset: int):
        super().__init__(
            f"truncated file: needed {needed} bytes at offset {offset}, only {available} available"
        )
        self.offset = offset


class MetaSectionMismatch(FormatError):
    def __init__(self, detail: str):
        super().__init__(f"container metadata mismatch: {detail}")


class HeaderMismatch(FormatError):
    def __init__(self, detail: str):
        super().__init__(f"CSV header mismatch: {detail}")


class RaggedRow(FormatError):
    def __init__(self, row: int, expected: int, found: int):
        super().__init__(f"ragged CSV row {row}: expected {expected} fields, found {found}")
        self.row = row


class UnparsableNumber(FormatError):
    def __init__(self, row: int, col: int, text: str):
        super().__init__(f"unparsable number at row {row}, column {col}: {text!r}")
        self.row = row
        self.col = col


class SchemaMismatch(FormatError):
    def __init__(self, detail: str):
        super().__init__(f"model JSON schema mismatch: {detail}")


# --- data contract errors ---------------------------------------------------

class NonFiniteValue(ContractError):
    def __init__(self, where: str, row: int):
        super().__init__(f"non-finite value in {where} at row {row}")
        self.row = row


class LabelOutOfRange(ContractError):
    def __init__(self, row: int, label: int, n_classes: int):
        super().__init__(f"label {label} at row {row} outside [0, {n_classes})")
        self.row = row


class MissingLabels(ContractError):
    def __init__(self):
        super().__init__("training FeatureSet has no labels")


class MissingLogits(ContractError):
    def __init__(self):
        super().__init__("FeatureSet has no logits but a logit-based score was requested")


class EmptyClass(ContractError):
    def __init__(self, c: int):
        super().__init__(f"class {c} has no training samples")
        self.class_index = c


class DimZero(ContractError):
    def __init__(self):
        super().__init__("feature dimension is zero")


class DimensionMismatch(ContractError):
    def __init__(self, expected: int, found: int):
        super().__init__(f"dimension mismatch: model expects {expected}, input has {found}")


class ZeroL1Norm(ContractError):
    def __init__(self, row: int = -1):
        at = f" at row {row}" if row >= 0 else ""
        super().__init__(f"feature vector has zero L1 norm{at}; weighted score undefined")
        self.row = row


class SingleClassNonNearest(ContractError):
    def __init__(self):
        super().__init__("single-class model: sum over non-nearest centroids is empty")


class KTooLarge(ContractError):
    def __init__(self, k: int, n_train: int):
        super().__init__(f"k={k} exceeds training set size {n_train}")


class EmptyTrainSet(ContractError):
    def __init__(self):
        super().__init__("training feature set is empty or missing")


class EmptyScoreSet(ContractError):
    def __init__(self, which: str):
        super().__init__(f"empty score set: {which}")


class BadTarget(ContractError):
    def __init__(self, target: float):
        super().__init__(f"tpr target {target} outside (0, 1]")


class EmptyValidationSet(ContractError):
    def __init__(self, which: str):
        super().__init__(f"empty validation set: {which}")


class SpecInvalid(ContractError):
    def __init__(self, detail: str):
        super().__init__(f"invalid generator spec: {detail}")
