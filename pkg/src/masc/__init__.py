"""MASC toolchain: parse, check, interpret and translate MASC models."""

from .errors import (AssertionFailure, CheckError, Diagnostic, IREvalError, MascError, MascRuntimeError,
                     ParseError, TranslationError)
from .frontend import CheckedProgram, check, check_program, load, parse, rewrite_bounded_loops, to_source
from .emit import emit_program
from .interp import Interpreter, RunOptions, run
from .ireval import IREvaluator, eval_ir
from .translate import FuncIR, translate

__version__ = "0.1.0"

__all__ = ["AssertionFailure", "CheckError", "CheckedProgram", "Diagnostic", "FuncIR", "IREvalError",
           "IREvaluator", "Interpreter", "MascError", "MascRuntimeError", "ParseError", "RunOptions",
           "TranslationError", "check", "check_program", "emit_program", "eval_ir", "load", "parse",
           "rewrite_bounded_loops", "run", "to_source", "translate"]
