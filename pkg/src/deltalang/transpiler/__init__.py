"""Delta to bounded-IR transpiler and the IR reference interpreter."""
from .compile import transpile
from .interp import IRResult, run_ir
from .ir import (
    IAssert, IAssign, IBlock, ICall, IFor, IIf, IPred, IReturn, IRFunction, IRProgram, IShadow,
)
from .text import emit_text, parse_ir

__all__ = [
    "transpile", "run_ir", "IRResult", "emit_text", "parse_ir",
    "IAssert", "IAssign", "IBlock", "ICall", "IFor", "IIf", "IPred", "IReturn", "IRFunction",
    "IRProgram", "IShadow",
]
