"""Scheduling engine for distributed flexible assembly lines.

Thin python surface over the C++ core: seeded instance generation, the
residual-scheduling simulator, priority-rule dispatching, online A2C
training, Monte-Carlo soft-shielded dispatch, LP export, the exhaustive
oracle, and the DCL/DTL metrics.
"""

from ._core import (
    Candidate,
    Checkpoint,
    EnvState,
    EpisodeStats,
    GeneratorSpec,
    Instance,
    Job,
    Line,
    ScheduledTask,
    auto_big_m,
    check_constraints,
    dcl,
    dispatch_with_rule,
    dtl,
    encode,
    enumerate_candidates,
    exact_solve,
    export_lp,
    gantt_svg,
    generate,
    generator_spec_from_json,
    greedy_dispatch,
    is_terminal,
    load,
    load_checkpoint,
    load_schedule,
    make_candidate,
    reset,
    rule_names,
    save,
    save_checkpoint,
    save_schedule,
    select,
    shielded_dispatch,
    step,
    tiny1,
    totals,
    train,
    validate,
)

__all__ = [
    "Candidate",
    "Checkpoint",
    "EnvState",
    "EpisodeStats",
    "GeneratorSpec",
    "Instance",
    "Job",
    "Line",
    "ScheduledTask",
    "auto_big_m",
    "check_constraints",
    "dcl",
    "dispatch_with_rule",
    "dtl",
    "encode",
    "enumerate_candidates",
    "exact_solve",
    "export_lp",
    "gantt_svg",
    "generate",
    "generator_spec_from_json",
    "greedy_dispatch",
    "is_terminal",
    "load",
    "load_checkpoint",
    "load_schedule",
    "make_candidate",
    "reset",
    "rule_names",
    "save",
    "save_checkpoint",
    "save_schedule",
    "select",
    "shielded_dispatch",
    "step",
    "tiny1",
    "totals",
    "train",
    "validate",
]
