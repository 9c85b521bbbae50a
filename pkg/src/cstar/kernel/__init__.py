"""
CStar - Kernel

LCF-style kernel for simply-typed higher-order logic: types, terms,
theorems, primitive rules and the registry of constants, definitions,
axioms and oracles.
"""

from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    Abs,
    App,
    Const,
    Term,
    Var,
    alpha_eq,
    frees,
    mk_app,
    vsubst,
)
from cstar.kernel.thm import (
    Theorem,
    abs_rule,
    assume,
    beta,
    conclusion,
    deduct_antisym,
    disch,
    eq_mp,
    gen,
    hypotheses,
    inst,
    inst_type,
    mk_comb_rule,
    mp,
    refl,
    spec,
    symm,
    trans,
)
from cstar.kernel.types import BOOL, CTYPE, HPROP, INT_LIST, INTEGER, HolType, TyApp, TyVar
