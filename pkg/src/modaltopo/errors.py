class ModalTopoError(Exception):
    pass


class ParseError(ModalTopoError, ValueError):
    """Malformed formula text.  ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BudgetExceeded(ModalTopoError):
    """An exhaustive search would exceed its configured size cap."""


class NotTransitive(ModalTopoError, ValueError):
    pass


class InvalidTopology(ModalTopoError, ValueError):
    pass


class InvalidAssignment(ModalTopoError, ValueError):
    pass


class UnboundVariable(ModalTopoError, KeyError):
    def __str__(self):
        return f"no valuation for variable {self.args[0]!r}"
