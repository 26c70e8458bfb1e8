"""
Identity checks - residual testing shared by the engine and the suites
"""

from __future__ import annotations
from typing import Any, Dict, Optional

from sympy import Rational
from sympy.polys.fields import FracElement

from app.combination import Combination
from app.errors import VerificationFailure
from app.scalar import render


def is_zero(residual: Any) -> bool:
    if isinstance(residual, bool):
        return residual
    if isinstance(residual, Combination):
        return residual.is_zero()
    if isinstance(residual, (FracElement, Rational, int)):
        return residual == 0
    raise TypeError(f"cannot decide whether {type(residual).__name__} vanishes")


def describe(residual: Any) -> Optional[str]:
    if isinstance(residual, bool):
        return None if residual else "condition is false"
    if isinstance(residual, FracElement):
        return render(residual)
    return str(residual)


def check_row(identity: str, anchor: str, residual: Any) -> Dict[str, Any]:
    """Report row; a passing identity carries no counterexample"""
    ok = is_zero(residual)
    return {
        "identity": identity,
        "anchor": anchor,
        "status": "pass" if ok else "fail",
        "counterexample": None if ok else describe(residual),
    }


def require(identity: str, residual: Any, context: str = "") -> None:
    """
    Raises:
        VerificationFailure: if the residual does not vanish
    """
    if not is_zero(residual):
        detail = describe(residual)
        if context:
            detail = f"{context}: {detail}"
        raise VerificationFailure(identity, detail)
