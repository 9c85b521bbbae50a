"""
CStar - C Frontend

Include expansion, parsing of the C subset with verification attributes,
and the translation stage that slices functions into segments and assembles
the operational proof program.
"""

from cstar.cfront.ast import CProgram, CType, FuncDef
from cstar.cfront.parser import parse_program
from cstar.cfront.preprocess import Expanded, Preprocessor
from cstar.cfront.slicing import ProofProgram, Segment, assemble_operational_program, slice_segments

__all__ = [
    "CProgram",
    "CType",
    "Expanded",
    "FuncDef",
    "Preprocessor",
    "ProofProgram",
    "Segment",
    "assemble_operational_program",
    "parse_program",
    "slice_segments",
]
