"""Exception hierarchy.

Every error carries a ``category`` used by the command line front end to
build its single-line ``category: message`` report and pick an exit code.
"""

from __future__ import annotations


class AggCodaError(Exception):
    category = "error"


class InputError(AggCodaError, ValueError):
    category = "input"


class ParseError(InputError):
    category = "parse"


class NegativeEntry(InputError):
    def __init__(self, row: int, col: int, value: float):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"negative entry {value!r} at row {row}, column {col}")


class BlockViolation(InputError):
    def __init__(self, row: int, block: int, count: int):
        self.row, self.block, self.count = row, block, count
        super().__init__(
            f"row {row} has {count} ones in covariate block {block} (expected exactly 1)"
        )


class BlockSpecMismatch(InputError):
    pass


class NonBinaryEntry(InputError):
    pass


class UnknownLevel(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidWeights(InputError):
    pass


class MissingPairing(InputError):
    """An operation needs the indicator matrix an aggregate table came from."""


class NumericalError(AggCodaError, ArithmeticError):
    category = "numerical"


class ZeroTotal(NumericalError):
    pass


class NonPositiveCell(NumericalError):
    def __init__(self, row: int, col: int, value: float):
        self.row, self.col, self.value = row, col, value
        super().__init__(
            f"cell ({row}, {col}) = {value!r} is not strictly positive; "
            "use the first-order approximation or a pseudo-count"
        )


class ZeroMatrix(NumericalError):
    pass


class CenteringViolation(NumericalError):
    pass


class AxisOutOfRange(AggCodaError, IndexError):
    category = "input"


class ConfigError(AggCodaError, ValueError):
    category = "config"
