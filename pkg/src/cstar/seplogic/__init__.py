"""
CStar - Separation Logic

The separation-logic theory (constants, trusted axioms, array lemmas), the
concrete heap evaluator used as a semantic oracle, and integer arithmetic.
"""

from cstar.seplogic.arith import ArithOracle, arith_equal, arith_rule, get_oracle, normal_form
from cstar.seplogic.ctypes_info import CTYPES, CTypeInfo
from cstar.seplogic.evaluator import Bounds, entails_semantically, eval_bool, eval_hprop
from cstar.seplogic.theory import array_lemma, register_theory
