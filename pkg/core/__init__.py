"""
Core domain models and algorithms for binary constraint optimization.
"""

from .exceptions import ContractError, CopError, GuardError, InstanceFormatError, NumericError
from .models import Assignment, CopInstance, Edge, InstanceValidationResult
from .objective import local_cost, total_cost, validate_instance
from .instance_io import parse_instance, parse_solution, write_instance, write_solution
from .exact import brute_force_optimum, cpsat_optimum
from .generator import GenSpec, generate_instance
from .coopt_solver import (
    AgentState,
    SolverConfig,
    SolverReport,
    UpdateSchedule,
    closed_form_evolution,
    effective_field,
    flow_step,
    run_qoa,
)
from .local_search import LsReport, check_local_optimum, local_search_from, local_search_run, mrls_run

__all__ = [
    "ContractError",
    "CopError",
    "GuardError",
    "InstanceFormatError",
    "NumericError",
    "Assignment",
    "CopInstance",
    "Edge",
    "InstanceValidationResult",
    "local_cost",
    "total_cost",
    "validate_instance",
    "parse_instance",
    "parse_solution",
    "write_instance",
    "write_solution",
    "brute_force_optimum",
    "cpsat_optimum",
    "GenSpec",
    "generate_instance",
    "AgentState",
    "SolverConfig",
    "SolverReport",
    "UpdateSchedule",
    "closed_form_evolution",
    "effective_field",
    "flow_step",
    "run_qoa",
    "LsReport",
    "check_local_optimum",
    "local_search_from",
    "local_search_run",
    "mrls_run",
]
