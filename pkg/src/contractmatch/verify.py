"""Executable checkers for the comparative properties of stable outcomes.

Each checker returns a PropertyReport; a False report carries witnesses
that replay to a concrete violation. Checkers raise only when their
hypotheses fail (PreconditionViolatedError and friends), never to signal
a property failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    BudgetExceededError,
    InfeasibleOutcomeError,
    NotTwoSidedError,
    PreconditionViolatedError,
    UnstableInputError,
)
from .model import (
    EnumerationBudget,
    Instance,
    Matching,
    Outcome,
    iter_raw_outcomes,
    outcome_is_feasible,
)
from .stability import payoffs_are_blocked


@dataclass(frozen=True)
class PropertyReport:
    """Verdict for one named property, with counterexample data when false."""

    name: str
    holds: bool
    witnesses: tuple = ()
    details: dict = field(default_factory=dict)


def _require_two_sided(inst: Instance) -> None:
    if not inst.two_sided:
        raise NotTwoSidedError("instance has no firm/worker partition")


def _require_feasible(inst: Instance, outcome: Outcome) -> None:
    if not outcome_is_feasible(inst, outcome):
        raise InfeasibleOutcomeError("outcome is not feasible for this instance")


def _require_stable(inst: Instance, outcome: Outcome, label: str) -> None:
    _require_feasible(inst, outcome)
    if payoffs_are_blocked(inst, outcome.payoff_map()):
        raise UnstableInputError(f"{label} admits a blocking pair")


def _budget_iter(inst: Instance, budget: EnumerationBudget | None):
    cap = (budget or EnumerationBudget()).max_outcomes
    count = 0
    for pairs, v in iter_raw_outcomes(inst):
        count += 1
        if count > cap:
            raise BudgetExceededError(
                f"more than {cap} outcomes examined; raise the enumeration budget"
            )
        yield pairs, v


def is_pairwise_efficient(inst: Instance) -> PropertyReport:
    """Within every menu, one side gains exactly when the other loses.

    For any two distinct contracts of the same pair, the firm's amounts and
    the worker's amounts must move in strictly opposite directions; equal
    firm amounts with different worker amounts (or vice versa) break the
    biconditional.
    """
    _require_two_sided(inst)
    firm_set = set(inst.firms)
    witnesses = []
    for m in inst.menus:
        a, b = m.pair
        f, w = (a, b) if a in firm_set else (b, a)
        cs = m.contracts
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                df = cs[i][f] - cs[j][f]
                dw = cs[i][w] - cs[j][w]
                if not (df > 0 > dw or df < 0 < dw):
                    witnesses.append((m.pair, cs[i], cs[j]))
    return PropertyReport("pairwise-efficiency", not witnesses, tuple(witnesses))


def has_disjoint_yields(inst: Instance) -> PropertyReport:
    """No firm can earn the same amount with two different workers."""
    _require_two_sided(inst)
    firm_set = set(inst.firms)
    yields: dict[int, list[tuple[int, set[Fraction]]]] = {f: [] for f in inst.firms}
    for m in inst.menus:
        a, b = m.pair
        f, w = (a, b) if a in firm_set else (b, a)
        yields[f].append((w, {c[f] for c in m.contracts}))
    witnesses = []
    for f in sorted(yields):
        entries = yields[f]
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                w1, s1 = entries[i]
                w2, s2 = entries[j]
                for value in sorted(s1 & s2):
                    witnesses.append((f, w1, w2, value))
    return PropertyReport("disjoint-yields", not witnesses, tuple(witnesses))


def is_weakly_pareto_optimal_for_firms(
    inst: Instance, outcome: Outcome, budget: EnumerationBudget | None = None
) -> PropertyReport:
    """No feasible outcome pays every firm strictly more than this one."""
    _require_two_sided(inst)
    _require_feasible(inst, outcome)
    firms = inst.firms
    v = outcome.payoff_map()
    for pairs, alt in _budget_iter(inst, budget):
        if all(alt[f] > v[f] for f in firms):
            witness = Outcome.of(Matching(pairs), alt)
            return PropertyReport("firm-pareto", False, (witness,))
    return PropertyReport("firm-pareto", True)


def check_firm_optimality(
    inst: Instance, outcome: Outcome, budget: EnumerationBudget | None = None
) -> PropertyReport:
    """Every stable outcome pays every firm at most what this outcome does."""
    _require_two_sided(inst)
    _require_feasible(inst, outcome)
    firms = inst.firms
    v = outcome.payoff_map()
    witnesses = []
    for pairs, alt in _budget_iter(inst, budget):
        if payoffs_are_blocked(inst, alt):
            continue
        losers = [f for f in firms if v[f] < alt[f]]
        if losers:
            stable = Outcome.of(Matching(pairs), alt)
            witnesses.extend((f, stable) for f in losers)
    return PropertyReport("firm-optimality", not witnesses, tuple(witnesses))


def check_pair_tradeoff(inst: Instance, o1: Outcome, o2: Outcome) -> PropertyReport:
    """Between two stable outcomes, matched partners' payoffs trade off.

    For every pair matched in the first outcome, if one member does
    strictly better there than in the second outcome, the partner must do
    at least as well in the second. The report's details also say whether
    the partner always does strictly better, which need not hold.
    """
    _require_stable(inst, o1, "first outcome")
    _require_stable(inst, o2, "second outcome")
    v1 = o1.payoff_map()
    v2 = o2.payoff_map()
    weak_witnesses = []
    strict_witnesses = []
    for pair in o1.matching.pairs:
        for a, b in (pair, pair[::-1]):
            if v1[a] > v2[a]:
                if not v2[b] >= v1[b]:
                    weak_witnesses.append((a, b, v1[a], v2[a], v1[b], v2[b]))
                elif not v2[b] > v1[b]:
                    strict_witnesses.append((a, b, v1[a], v2[a], v1[b], v2[b]))
    return PropertyReport(
        "pair-tradeoff",
        not weak_witnesses,
        tuple(weak_witnesses),
        {
            "strict_holds": not weak_witnesses and not strict_witnesses,
            "strict_witnesses": tuple(strict_witnesses),
        },
    )


def check_group_tradeoff(
    inst: Instance, outcome: Outcome, stable_outcome: Outcome, group: Iterable[int]
) -> PropertyReport:
    """Gains of a group in a stable outcome are paid for by its partners.

    Hypotheses (violations raise PreconditionViolatedError): the second
    outcome is stable; every group member is paid strictly more there than
    in the first outcome; and no group member forms a blocking pair with
    their stable-outcome partner against the first outcome. Then each such
    partner is paid at least as much in the first outcome as in the stable
    one. An empty group holds vacuously.
    """
    if not outcome_is_feasible(inst, outcome):
        raise PreconditionViolatedError("outcome", "first outcome is not feasible")
    try:
        _require_stable(inst, stable_outcome, "stable outcome")
    except (InfeasibleOutcomeError, UnstableInputError) as exc:
        raise PreconditionViolatedError("stable-outcome", str(exc)) from exc
    members = sorted(set(int(a) for a in group))
    agent_set = set(inst.agents)
    if any(a not in agent_set for a in members):
        raise PreconditionViolatedError("group", "group contains unknown agents")
    v = outcome.payoff_map()
    vs = stable_outcome.payoff_map()
    mate = stable_outcome.matching.mate
    menus = inst.menu_map()
    for a in members:
        if not vs[a] > v[a]:
            raise PreconditionViolatedError(
                "strict-gain", f"agent {a} does not strictly gain in the stable outcome"
            )
        # A strict gain over a nonnegative payoff means the agent is matched
        # in the stable outcome, so the partner is always a distinct agent.
        b = mate(a)
        menu = menus.get((a, b) if a < b else (b, a))
        if menu and any(c[a] > v[a] and c[b] > v[b] for c in menu.contracts):
            raise PreconditionViolatedError(
                "no-blocking",
                f"pair {{{a}, {b}}} blocks the first outcome",
            )
    witnesses = []
    for b in sorted({mate(a) for a in members}):
        if not v[b] >= vs[b]:
            witnesses.append((b, v[b], vs[b]))
    return PropertyReport("group-tradeoff", not witnesses, tuple(witnesses))


def check_employment_invariance(
    inst: Instance, budget: EnumerationBudget | None = None
) -> PropertyReport:
    """All stable outcomes employ the same firms and the same workers.

    Requires pairwise efficiency and disjoint yields; employment means a
    strictly positive payoff.
    """
    _require_two_sided(inst)
    if not is_pairwise_efficient(inst).holds:
        raise PreconditionViolatedError("pairwise-efficiency")
    if not has_disjoint_yields(inst).holds:
        raise PreconditionViolatedError("disjoint-yields")
    firms = inst.firms
    workers = inst.workers
    reference = None
    witnesses = []
    for pairs, v in _budget_iter(inst, budget):
        if payoffs_are_blocked(inst, v):
            continue
        employed = (
            frozenset(f for f in firms if v[f] > 0),
            frozenset(w for w in workers if v[w] > 0),
        )
        current = (Outcome.of(Matching(pairs), v), employed)
        if reference is None:
            reference = current
        elif employed != reference[1]:
            witnesses.append((reference[0], current[0], reference[1], employed))
    return PropertyReport("employment-invariance", not witnesses, tuple(witnesses))


def check_sides_opposed(inst: Instance, o1: Outcome, o2: Outcome) -> PropertyReport:
    """If every firm weakly prefers one stable outcome, every worker weakly
    prefers the other.

    Requires pairwise efficiency and disjoint yields, and both outcomes
    stable. The implication is checked in both directions whenever its
    antecedent holds.
    """
    _require_two_sided(inst)
    if not is_pairwise_efficient(inst).holds:
        raise PreconditionViolatedError("pairwise-efficiency")
    if not has_disjoint_yields(inst).holds:
        raise PreconditionViolatedError("disjoint-yields")
    _require_stable(inst, o1, "first outcome")
    _require_stable(inst, o2, "second outcome")
    witnesses = []
    for direction, (x, y) in (("forward", (o1, o2)), ("reverse", (o2, o1))):
        vx = x.payoff_map()
        vy = y.payoff_map()
        if all(vy[f] >= vx[f] for f in inst.firms):
            for w in inst.workers:
                if not vx[w] >= vy[w]:
                    witnesses.append((direction, w, vx[w], vy[w]))
    return PropertyReport("sides-opposed", not witnesses, tuple(witnesses))
