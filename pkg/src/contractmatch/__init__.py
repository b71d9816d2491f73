"""Solver and verification toolkit for two-sided contract-menu matching.

Agents on two sides of a market (or in a plain partnership pool) can pair
up and split money according to a finite menu of divisions per pair. The
package computes stable outcomes with a firm-proposing deferred-acceptance
procedure, enumerates all outcomes and the full core by brute force, and
checks the structural properties that relate them.
"""

from .errors import (
    BudgetExceededError,
    ContractMatchError,
    DuplicateMenuError,
    EmptyContractSetError,
    FormatError,
    InfeasibleOutcomeError,
    InfeasibleParamsError,
    InstanceError,
    InvalidPartitionError,
    MalformedMenuError,
    NegativeContractWarning,
    NotSingletonMenusError,
    NotTwoSidedError,
    PreconditionViolatedError,
    SameSideMenuError,
    UnknownAgentError,
    UnknownNameError,
    UnstableInputError,
)
from .generator import BUILTIN_NAMES, GenParams, builtin, gen_random
from .model import (
    Allocation,
    ContractMenu,
    EnumerationBudget,
    Instance,
    Matching,
    Money,
    Outcome,
    enumerate_outcomes,
    instance_from_dict,
    instance_to_dict,
    is_superadditive,
    money_str,
    outcome_from_dict,
    outcome_is_feasible,
    outcome_to_dict,
    parse_money,
    validate_instance,
)
from .procedure import (
    DEFAULT_POLICY,
    POLICIES,
    Proposal,
    ProposalSpace,
    TieBreakPolicy,
    Trace,
    TraceStep,
    build_proposal_space,
    classic_da,
    enumerate_procedure_outcomes,
    run_procedure,
)
from .stability import (
    BlockingCertificate,
    blocking_coalitions,
    enumerate_core,
    is_stable,
)
from .verify import (
    PropertyReport,
    check_employment_invariance,
    check_firm_optimality,
    check_group_tradeoff,
    check_pair_tradeoff,
    check_sides_opposed,
    has_disjoint_yields,
    is_pairwise_efficient,
    is_weakly_pareto_optimal_for_firms,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "BlockingCertificate",
    "BUILTIN_NAMES",
    "BudgetExceededError",
    "ContractMatchError",
    "ContractMenu",
    "DEFAULT_POLICY",
    "DuplicateMenuError",
    "EmptyContractSetError",
    "EnumerationBudget",
    "FormatError",
    "GenParams",
    "InfeasibleOutcomeError",
    "InfeasibleParamsError",
    "Instance",
    "InstanceError",
    "InvalidPartitionError",
    "MalformedMenuError",
    "Matching",
    "Money",
    "NegativeContractWarning",
    "NotSingletonMenusError",
    "NotTwoSidedError",
    "Outcome",
    "POLICIES",
    "PreconditionViolatedError",
    "PropertyReport",
    "Proposal",
    "ProposalSpace",
    "SameSideMenuError",
    "TieBreakPolicy",
    "Trace",
    "TraceStep",
    "UnknownAgentError",
    "UnknownNameError",
    "UnstableInputError",
    "blocking_coalitions",
    "build_proposal_space",
    "builtin",
    "check_employment_invariance",
    "check_firm_optimality",
    "check_group_tradeoff",
    "check_pair_tradeoff",
    "check_sides_opposed",
    "classic_da",
    "enumerate_core",
    "enumerate_outcomes",
    "enumerate_procedure_outcomes",
    "gen_random",
    "has_disjoint_yields",
    "instance_from_dict",
    "instance_to_dict",
    "is_pairwise_efficient",
    "is_stable",
    "is_superadditive",
    "is_weakly_pareto_optimal_for_firms",
    "money_str",
    "outcome_from_dict",
    "outcome_is_feasible",
    "outcome_to_dict",
    "parse_money",
    "run_procedure",
    "validate_instance",
]
