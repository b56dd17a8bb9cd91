"""Delta: a small logic programming language with bounded loops, its evaluator and tooling."""
from . import values
from . import syntax  # noqa: F401  (import before model: validate depends on model)
from .analysis import CostCertificate, RankResult, compose_bounds, meter_fit, rank
from .errors import DeltaError
from .evaluator import EvalOutcome, RunResult, eval_formula, run_program
from .model import Signature, builtin_model
from .syntax import parse_program, pretty_print, validate
from .transpiler import emit_text, parse_ir, run_ir, transpile

__version__ = "0.1.0"

__all__ = [
    "values", "CostCertificate", "RankResult", "compose_bounds", "meter_fit", "rank", "DeltaError",
    "EvalOutcome", "RunResult", "eval_formula", "run_program", "Signature", "builtin_model",
    "parse_program", "pretty_print", "validate", "emit_text", "parse_ir", "run_ir", "transpile",
]
