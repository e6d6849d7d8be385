class DomainError(ValueError):
    """Argument outside the domain where a formula or operation is defined."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed its configured budget."""

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: requires {required} but budget is {budget}")


class NotATree(ValueError):
    pass
