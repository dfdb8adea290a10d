"""Exception hierarchy.

Structural failures derive from :class:`AxiomViolation` and carry the axiom
name plus the lexicographically first witnessing basis indices.
"""

from __future__ import annotations


class BihomError(Exception):
    pass


class AxiomViolation(BihomError, ValueError):
    def __init__(self, axiom: str, witness: tuple | None = None, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        self.detail = detail
        msg = axiom
        if witness is not None:
            msg += f" (witness {witness})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)

    def as_dict(self) -> dict:
        return {"axiom": self.axiom,
                "witness": list(self.witness) if self.witness is not None else None,
                "detail": self.detail}


class DimensionMismatch(AxiomViolation):
    def __init__(self, detail: str):
        super().__init__("dimension", None, detail)


class NonCommutingTwists(AxiomViolation):
    pass


class NotMultiplicative(AxiomViolation):
    pass


class NotBihomAssociative(AxiomViolation):
    pass


class BimoduleAxiomViolation(AxiomViolation):
    pass


class ExtensionInvalid(AxiomViolation):
    pass


class CrossedModuleInvalid(AxiomViolation):
    pass


class AInftyViolation(AxiomViolation):
    pass


class MorphismInvalid(AxiomViolation):
    pass


class BudgetExceeded(BihomError):
    def __init__(self, needed: int, budget: int, what: str = ""):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} tensor entries, budget is {budget}".strip())


class InputNotAssociative(BihomError):
    pass


class MorphismCheckFailed(BihomError):
    pass


class PositionOutOfRange(BihomError, IndexError):
    pass


class ArityMismatch(BihomError, ValueError):
    pass


class TooManyArguments(BihomError, ValueError):
    pass


class TargetMismatch(BihomError, ValueError):
    pass


class NotACocycle(BihomError, ValueError):
    pass


class NotVerified(BihomError, ValueError):
    pass


class OrderMismatch(BihomError, ValueError):
    pass


class NotInvertible(BihomError, ValueError):
    pass


class SplittingIncompatible(BihomError, ValueError):
    pass


class NotSkeletal(BihomError, ValueError):
    pass


class NotStrict(BihomError, ValueError):
    pass


class WellDefinednessFailure(AxiomViolation):
    pass


class ShapeMismatch(BihomError, ValueError):
    pass


class ParseError(BihomError, ValueError):
    pass


class UnknownKind(BihomError, ValueError):
    pass
