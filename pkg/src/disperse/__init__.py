"""Dispersion processes on finite graphs.

``n`` particles start on one vertex and spread by random walk until each
rests on its own vertex.  The package simulates the sequential, parallel
and uniform schedules of that process (plus lazy and continuous-time
variants), manipulates their trajectory blocks through cut-and-paste
surgery, and compares observed dispersion times against exact walk
statistics and proven bounds.
"""

from .blocks import (Block, block_stats, check, cut_paste, enumerate_blocks,
                     permute_rows, pts, ptu, stp)
from .errors import CapabilityError, DomainError, IntegrityError
from .graphs import Graph, parse_spec
from .harness import (Estimate, ExperimentReport, estimate_dispersion,
                      table_reproduce)
from .idla import (FIRST_VACANT, DispersionResult, RunOutput, SettleRule,
                   least_action_rule, run, run_parallel, run_sequential,
                   run_uniform)

__version__ = "0.1.0"

__all__ = [
    "Block", "CapabilityError", "DispersionResult", "DomainError",
    "Estimate", "ExperimentReport", "FIRST_VACANT", "Graph",
    "IntegrityError", "RunOutput", "SettleRule", "block_stats", "check",
    "cut_paste", "enumerate_blocks", "estimate_dispersion",
    "least_action_rule", "parse_spec", "permute_rows", "pts", "ptu", "run",
    "run_parallel", "run_sequential", "run_uniform", "stp",
    "table_reproduce",
]
