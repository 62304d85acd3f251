"""Schedulability analysis for probabilistic conditional DAG tasks on
reservation systems.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (
    Atom,
    ConditionalDag,
    DagRealization,
    DiscreteRV,
    JobRecord,
    JointDistribution,
    KBound,
    MenuEntry,
    MissConstraint,
    MissReport,
    ParseError,
    ReservationConfig,
    SimTrace,
    TaskSpec,
    WeightedValue,
    analyze,
    check_constraints,
    enumerate_realizations,
    exceedance,
    from_realizations,
    inverse_sbf,
    joint_cdf,
    longest_path,
    optimize_task,
    parse_graph,
    parse_taskset,
    response_time_bound,
    response_time_cdf,
    response_time_rv,
    sbf,
    select_config,
    simulate,
    validate,
    validate_task,
    workload_rv,
)

__all__ = [
    "Atom",
    "ConditionalDag",
    "DagRealization",
    "DiscreteRV",
    "JobRecord",
    "JointDistribution",
    "KBound",
    "MenuEntry",
    "MissConstraint",
    "MissReport",
    "ParseError",
    "ReservationConfig",
    "SimTrace",
    "TaskSpec",
    "WeightedValue",
    "analyze",
    "check_constraints",
    "enumerate_realizations",
    "exceedance",
    "from_realizations",
    "inverse_sbf",
    "joint_cdf",
    "longest_path",
    "optimize_task",
    "parse_graph",
    "parse_taskset",
    "response_time_bound",
    "response_time_cdf",
    "response_time_rv",
    "sbf",
    "select_config",
    "simulate",
    "validate",
    "validate_task",
    "workload_rv",
]

__version__ = "0.1.0"
