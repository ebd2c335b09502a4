"""Exception types raised across the package."""


class ProdQuotError(Exception):
    """Base class for all package errors."""


class GroupError(ProdQuotError):
    """Invalid group data (bad table, bad parameters, cap exceeded while enumerating)."""


class InvalidParameters(GroupError):
    pass


class PresentationSyntaxError(ProdQuotError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CapExceeded(ProdQuotError):
    """Coset enumeration passed its live-coset cap."""


class CatalogError(ProdQuotError):
    """Catalog file could not be parsed or failed validation."""


class OrderIncomplete(CatalogError):
    def __init__(self, order: int):
        super().__init__(f"catalog does not certify order {order} as complete")
        self.order = order


class NotFound(CatalogError):
    pass


class SignatureError(ProdQuotError):
    """Non-hyperbolic signature or non-integral Riemann-Hurwitz data."""


class MoveError(ProdQuotError):
    """A Hurwitz move was applied to a vector of the wrong shape."""


class EmptyFamily(ProdQuotError):
    """No generating vectors satisfy the hypotheses: no surface of this type."""


class OrbitCapExceeded(ProdQuotError):
    pass
