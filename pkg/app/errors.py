"""
Errors - one hierarchy for the engine, the CLI and the service
"""

from __future__ import annotations
from typing import Optional


class PodlesError(Exception):
    """Base class; `exit_code` is what the CLI returns for it"""

    exit_code = 2
    code = "DomainError"

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class ParseError(PodlesError):
    exit_code = 1
    code = "ParseError"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "position": self.position}


class DivisionByZero(PodlesError, ZeroDivisionError):
    code = "DivisionByZero"


class PoleAtLimit(PodlesError):
    code = "PoleAtLimit"


class NotIntegrable(PodlesError):
    code = "NotIntegrable"

    def __init__(self, monomial: tuple):
        super().__init__(f"monomial rhoi^{monomial[0]}*zb^{monomial[1]}*z^{monomial[2]} is outside the integrable domain")
        self.monomial = monomial

    def to_dict(self) -> dict:
        m, a, b = self.monomial
        return {"code": self.code, "message": str(self), "monomial": {"m": m, "a": a, "b": b}}


class SingularDiagonal(PodlesError):
    code = "SingularDiagonal"


class QuadratureNotConverged(PodlesError):
    code = "QuadratureNotConverged"


class UnknownSuite(PodlesError):
    code = "UnknownSuite"


class PatchError(PodlesError):
    code = "PatchError"


class VerificationFailure(PodlesError):
    exit_code = 3
    code = "VerificationFailure"

    def __init__(self, identity: str, counterexample: Optional[str] = None):
        message = f"identity '{identity}' failed"
        if counterexample:
            message += f": {counterexample}"
        super().__init__(message)
        self.identity = identity
        self.counterexample = counterexample

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "identity": self.identity,
            "counterexample": self.counterexample,
        }
