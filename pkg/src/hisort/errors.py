"""Exception hierarchy shared across the package."""


class HisortError(Exception):
    """Base class for all package errors."""


class ZeroVariance(HisortError):
    def __init__(self, column: str):
        super().__init__(f"column {column!r} has zero variance, cannot normalize")
        self.column = column


class UnknownLeaf(HisortError):
    pass


class UnknownEntity(HisortError):
    pass


class InvalidClassIndex(HisortError):
    pass


class TooLarge(HisortError):
    pass


class DimensionMismatch(HisortError):
    pass


class DegenerateNode(HisortError):
    def __init__(self, node: str, mu: float):
        super().__init__(f"capacity of leaves under {node!r} is {mu:.3g}, below the degeneracy floor")
        self.node = node
        self.mu = mu


class NotCompatible(HisortError):
    pass


class EmptyInterior(HisortError):
    pass


class UnsupportedStatement(HisortError):
    pass


class InvalidDistance(HisortError):
    pass


class SingularDesign(HisortError):
    pass


class NumericalBreakdown(HisortError):
    pass


class NodeLimit(HisortError):
    pass


class VersionMismatch(HisortError):
    pass
