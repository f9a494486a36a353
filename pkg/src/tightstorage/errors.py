"""Exception types shared across the package."""
from __future__ import annotations

from .numeric import ZeroDenominator


class TightStorageError(Exception):
    """Base class for package errors."""


class Unbounded(TightStorageError):
    pass


class TooLarge(TightStorageError):
    """A desk-scale guard (dimension or row count) was exceeded."""


class InvalidDisjunct(TightStorageError):
    pass


class InvalidParams(TightStorageError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid parameters")


class NodeLimit(TightStorageError):
    def __init__(self, limit: int, nodes: int):
        self.limit = limit
        self.nodes = nodes
        super().__init__(f"branch-and-bound node limit {limit} reached after {nodes} nodes")


class NoSolution(TightStorageError):
    pass


class BadScenario(TightStorageError):
    pass


__all__ = [
    "TightStorageError",
    "ZeroDenominator",
    "Unbounded",
    "TooLarge",
    "InvalidDisjunct",
    "InvalidParams",
    "NodeLimit",
    "NoSolution",
    "BadScenario",
]
