from __future__ import annotations

from typing import Any


class ToolkitError(RuntimeError):
    """Base class for every error the library raises on bad input."""


class LinalgError(ToolkitError):
    pass


class LatticeError(ToolkitError):
    pass


class RankTooLargeError(LatticeError):
    def __init__(self, rank: int, limit: int) -> None:
        super().__init__(f"Rank {rank} exceeds the enumeration limit {limit}")
        self.rank = rank
        self.limit = limit


class RootSystemError(ToolkitError):
    pass


class WeylClosureError(RootSystemError):
    def __init__(self, limit: int) -> None:
        super().__init__(
            f"Weyl group closure exceeded {limit} elements; root set is not a finite root system"
        )
        self.limit = limit


class ClassificationError(ToolkitError):
    pass


class NotRectangularError(ClassificationError):
    pass


class NotCubicError(ClassificationError):
    pass


class ShapeError(ClassificationError):
    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class PatternError(ClassificationError):
    pass


class DecomposableError(ClassificationError):
    def __init__(self, factors: list[Any]) -> None:
        super().__init__(
            f"Datum is decomposable into {len(factors)} factors; classify each factor separately"
        )
        self.factors = factors


class MultiplicityError(ToolkitError):
    pass


class SpectrumError(ToolkitError):
    pass


class EmbeddingError(ToolkitError):
    pass


class DatumFileError(ToolkitError):
    def __init__(self, path: str, message: str, location: str = "") -> None:
        where = f"{path}:{location}" if location else path
        super().__init__(f"{where}: {message}")
        self.path = path
        self.location = location
