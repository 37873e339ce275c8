"""Exception hierarchy shared by all subpackages."""


class DomainError(ValueError):
    """Input is well formed but outside the mathematical domain of an operation."""


class ParseError(ValueError):
    """Malformed expression text.

    Attributes
    ----------
    offset : int
        Byte offset into the input where parsing failed.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnsupportedOrderError(DomainError):
    """Pole order outside the range handled by Laurent extraction."""


class DegenerateCubicError(DomainError):
    """The cubic C1 has a repeated root (discriminant zero)."""


class InfeasibleICError(DomainError):
    """No positive B solves the energy constraint."""


class PathError(DomainError):
    """Integration path passes too close to a singular point."""
