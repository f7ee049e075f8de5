"""Exceptions raised by the engine.

Bad input is a ValueError subclass and exhausted caps are ResourceExhausted.
OracleFailure means two independent computations of the same quantity
disagreed. The report layer maps these to ERROR, BUDGET and FAIL.
"""


class ResourceExhausted(RuntimeError):
    pass


class OracleFailure(RuntimeError):
    pass


class ClosureCapExceeded(ResourceExhausted):
    def __init__(self, cap: int) -> None:
        super().__init__(f"Closure exceeded the cap of {cap} elements")
        self.cap = cap


class BudgetExceeded(ResourceExhausted):
    def __init__(self, explored: int, budget: int, what: str = "hom search") -> None:
        super().__init__(f"{what} explored {explored} prefixes, budget is {budget}")
        self.explored = explored
        self.budget = budget


class MixedElementKinds(ValueError):
    pass


class NonNormalArguments(ValueError):
    pass


class NotNormal(ValueError):
    pass


class EmptyList(ValueError):
    pass


class MixedParents(ValueError):
    pass


class GroupTooLarge(ValueError):
    def __init__(self, order: int, cap: int) -> None:
        super().__init__(f"Group of order {order} is over the H2 cap of {cap}")
        self.order = order
        self.cap = cap


class NotACocycle(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class NonCommutingSquare(ValueError):
    pass


class WordTooShort(ValueError):
    pass


class ManifestError(ValueError):
    pass


class TransgressionSolveFailed(OracleFailure):
    pass


class CriterionDisagreement(OracleFailure):
    pass
