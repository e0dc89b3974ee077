"""Exception hierarchy shared by every module."""


class GameError(Exception):
    """Base class for all errors raised by cigames."""


class InvalidChoice(GameError):
    pass


class KnowledgeViolation(GameError):
    """A strategy conditions on a bit (or the variant) its player does not know."""


class ParseError(GameError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f" in {text!r}"
        super().__init__(message)


class BudgetExceeded(GameError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} profile evaluations, budget is {budget}"
        )


class SelectionFailure(GameError):
    """No payoff-dominant equilibrium exists at a leaf (or no equilibrium at all)."""

    def __init__(self, message, leaf=None, equilibria=None):
        self.leaf = leaf
        self.equilibria = equilibria
        super().__init__(message)


class InvalidMechanism(GameError):
    pass


class ScriptError(GameError):
    pass


class DocumentError(GameError):
    pass
