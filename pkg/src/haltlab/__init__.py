"""Loop-guarded machine execution, dovetailed halting races, and
remainder-coded sequence prediction."""

from .machine import (
    BudgetExhausted,
    Configuration,
    Halted,
    MachineSpec,
    RunOutcome,
    SelfTerminated,
    canonicalize,
    load_machine,
    parse_machine,
    run,
    step,
)
from .guard import GuardedRunner, HistoryIndex, guarded_run
from .godel import (
    Alphabet,
    BetaParams,
    beta_enumerate_consistent,
    beta_eval,
    beta_fit,
    beta_value,
    decode_string,
    encode_string,
)
from .dovetail import MuProblem, RaceOutcome, race, totalize_mu
from .universe import MeasurementLog, PropertyTable, classify_property, measure, merge_logs, predict_next
from .proofs import ProofObject, check_proof, enumerate_proofs, godel_number_formula

__version__ = "0.1.0"
