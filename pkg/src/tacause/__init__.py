"""But-for and actual causes of MITL effects in runs of timed automata networks."""

from .causes import (ACTUAL, BUT_FOR, CauseQuery, CauseReport, check_cause, compute_causes,
                     naive_compute_causes)
from .checker import Goal, exists_run_satisfying, goal_of, holds, model_check_all
from .contingency import build_actual_network, build_clock_wrapper, build_location_contingency
from .counterfactual import build_but_for_network, build_cta
from .dsl import DslError, emit_formula, emit_model, emit_run, parse_formula, parse_model, \
    parse_run
from .mitl import evaluate_mitl_on_lasso
from .model import LassoRun, ModelError, Network, Step, TimedAutomaton, validate_run
from .runs import Event, events_of_run, local_projection, satisfies_events

__version__ = "0.1.0"
