"""Blocking detection and core enumeration.

A pair blocks an outcome when some entry of its menu pays both members
strictly more than the outcome does. The core is the set of feasible
outcomes no pair blocks; singles can never block because every payoff is
already at least the zero they would get alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InfeasibleOutcomeError
from .model import (
    Allocation,
    EnumerationBudget,
    Instance,
    Matching,
    Outcome,
    iter_raw_outcomes,
    outcome_is_feasible,
)


@dataclass(frozen=True)
class BlockingCertificate:
    """A pair and the menu entry with which it improves on an outcome."""

    coalition: tuple[int, int]
    allocation: Allocation


def payoffs_are_blocked(inst: Instance, payoffs: dict[int, Fraction]) -> bool:
    """Fast predicate used by enumeration sweeps; payoffs must cover all agents."""
    for m in inst.menus:
        a, b = m.pair
        va, vb = payoffs[a], payoffs[b]
        for c in m.contracts:
            if c[a] > va and c[b] > vb:
                return True
    return False


def blocking_coalitions(inst: Instance, outcome: Outcome) -> list[BlockingCertificate]:
    """Every (pair, contract) that blocks the outcome, in pair order then menu order."""
    if not outcome_is_feasible(inst, outcome):
        raise InfeasibleOutcomeError("outcome is not feasible for this instance")
    v = outcome.payoff_map()
    certs = []
    for m in inst.menus:
        a, b = m.pair
        for c in m.contracts:
            if c[a] > v[a] and c[b] > v[b]:
                certs.append(BlockingCertificate(m.pair, c))
    return certs


def is_stable(inst: Instance, outcome: Outcome) -> bool:
    """True iff no pair blocks the outcome."""
    if not outcome_is_feasible(inst, outcome):
        raise InfeasibleOutcomeError("outcome is not feasible for this instance")
    return not payoffs_are_blocked(inst, outcome.payoff_map())


def enumerate_core(
    inst: Instance, budget: EnumerationBudget | None = None
) -> list[Outcome]:
    """All stable outcomes, in the order enumerate_outcomes produces them.

    The budget bounds the number of outcomes examined, not the core size.
    """
    cap = (budget or EnumerationBudget()).max_outcomes
    examined = 0
    core: list[Outcome] = []
    for pairs, v in iter_raw_outcomes(inst):
        examined += 1
        if examined > cap:
            raise BudgetExceededError(
                f"more than {cap} outcomes examined; raise the enumeration budget"
            )
        if not payoffs_are_blocked(inst, v):
            core.append(Outcome.of(Matching(pairs), v))
    return core
