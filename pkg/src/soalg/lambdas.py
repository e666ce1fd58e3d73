"""The lambda calculus signature and presentation used across tests and the corpus."""

from __future__ import annotations

from .eqlogic import Equation, Presentation
from .kernel import EMPTY_VARS, MetaContext, Signature, Var, VarContext, mvar, op

__all__ = ["lambda_signature", "lambda_presentation", "BETA", "ETA"]


def lambda_signature() -> Signature:
    return Signature.of(abs=(1,), app=(0, 0))


def _beta() -> Equation:
    theta = MetaContext((1, 0), ("m", "n"))
    lhs = op("app", (0, op("abs", (1, mvar(1, Var(1))))), (0, mvar(2)))
    rhs = mvar(1, mvar(2))
    return Equation(theta, EMPTY_VARS, lhs, rhs, label="beta")


def _eta() -> Equation:
    theta = MetaContext((0,), ("f",))
    lhs = op("abs", (1, op("app", (0, mvar(1)), (0, Var(1)))))
    rhs = mvar(1)
    return Equation(theta, EMPTY_VARS, lhs, rhs, label="eta")


BETA = _beta()
ETA = _eta()


def lambda_presentation(eta: bool = True, name: str | None = None) -> Presentation:
    axioms = (BETA, ETA) if eta else (BETA,)
    if name is None:
        name = "lambda" if eta else "lambda_beta"
    return Presentation(lambda_signature(), axioms, name=name)
