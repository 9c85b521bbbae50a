"""
CStar - Integer Arithmetic

Polynomial normal forms for integer terms (used to compare addresses and
lengths modulo arithmetic) and the arithmetic oracle, which decides linear
integer formulas with z3 and mints theorems tagged "arith-oracle".

Anything that is not arithmetic (variables, addresses, applications of other
functions) is treated as an opaque integer atom.
"""

import hashlib
import logging
import os
import weakref
from typing import Dict, List, Optional, Tuple

import diskcache
import z3

from cstar.errors import ArithError, RuleError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import (
    Abs,
    App,
    Const,
    Term,
    Var,
    dest_binop,
    dest_int,
    frees,
    mk_binop,
    mk_eq,
    mk_int,
    strip_app,
)
from cstar.kernel.thm import Theorem
from cstar.kernel.types import BOOL, INTEGER, fun_ty
from cstar.quote.printer import print_term
from cstar.seplogic.ctypes_info import sizeof
from cstar.utils.constants import ARITH_TIMEOUT_MS, DEFAULT_CACHE_DIR

logger = logging.getLogger(__name__)

ARITH_TAG = "arith-oracle"

Monomial = Tuple[str, ...]
Poly = Dict[Monomial, int]

_INT_BIN = fun_ty(INTEGER, fun_ty(INTEGER, INTEGER))


# ---------------------------------------------------------------------------
# Polynomial normal form
# ---------------------------------------------------------------------------


def _add(p: Poly, q: Poly, scale: int = 1) -> Poly:
    out = dict(p)
    for mono, coeff in q.items():
        out[mono] = out.get(mono, 0) + scale * coeff
        if out[mono] == 0:
            del out[mono]
    return out


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            mono = tuple(sorted(m1 + m2))
            out[mono] = out.get(mono, 0) + c1 * c2
            if out[mono] == 0:
                del out[mono]
    return out


def _constant(p: Poly) -> Optional[int]:
    if not p:
        return 0
    if set(p) == {()}:
        return p[()]
    return None


class _Normalizer:
    def __init__(self):
        self.atoms: Dict[str, Term] = {}

    def atom(self, t: Term) -> Poly:
        key = print_term(t)
        self.atoms.setdefault(key, t)
        return {(key,): 1}

    def poly(self, t: Term) -> Poly:
        value = dest_int(t)
        if value is not None:
            return {(): value} if value else {}
        head, args = strip_app(t)
        name = head.name if isinstance(head, Const) else None
        if name == "neg" and len(args) == 1:
            return _add({}, self.poly(args[0]), -1)
        if name in ("+", "-") and len(args) == 2:
            return _add(self.poly(args[0]), self.poly(args[1]), 1 if name == "+" else -1)
        if name == "*" and len(args) == 2:
            return _mul(self.poly(args[0]), self.poly(args[1]))
        if name == "sizeof" and len(args) == 1 and isinstance(args[0], Const):
            size = sizeof(args[0].name)
            if size is not None:
                return {(): size}
        if name == "EXP" and len(args) == 2:
            exponent = _constant(self.poly(args[1]))
            if exponent is not None and exponent >= 0:
                base = self.poly(args[0])
                result: Poly = {(): 1}
                for _ in range(exponent):
                    result = _mul(result, base)
                return result
        if name in ("/", "%") and len(args) == 2:
            num = _constant(self.poly(args[0]))
            den = _constant(self.poly(args[1]))
            if num is not None and den is not None and den != 0:
                q = abs(num) // abs(den)
                q = q if (num >= 0) == (den >= 0) else -q
                value = q if name == "/" else num - den * q
                return {(): value} if value else {}
        return self.atom(t)


def normal_form(t: Term) -> Tuple[Tuple[Monomial, int], ...]:
    """Hashable canonical form of an integer term modulo ring arithmetic."""
    if t.ty != INTEGER:
        raise RuleError("normal_form expects an integer term")
    return tuple(sorted(_Normalizer().poly(t).items()))


def arith_equal(a: Term, b: Term) -> bool:
    return a.ty == INTEGER and b.ty == INTEGER and normal_form(a) == normal_form(b)


def is_linear(t: Term) -> bool:
    return all(len(mono) <= 1 for mono, _ in normal_form(t))


def normalize_term(t: Term) -> Term:
    """Rebuild an integer term from its normal form: sorted monomials, constant last."""
    normalizer = _Normalizer()
    poly = normalizer.poly(t)
    terms: List[Tuple[bool, Term]] = []
    for mono, coeff in sorted(poly.items(), key=lambda item: (item[0] == (), item[0])):
        if mono == ():
            terms.append((coeff < 0, mk_int(abs(coeff))))
            continue
        product: Optional[Term] = None
        for key in mono:
            factor = normalizer.atoms[key]
            product = factor if product is None else mk_binop(Const("*", _INT_BIN), product, factor)
        if abs(coeff) != 1:
            product = mk_binop(Const("*", _INT_BIN), mk_int(abs(coeff)), product)
        terms.append((coeff < 0, product))
    if not terms:
        return mk_int(0)
    negative, result = terms[0]
    if negative:
        result = App(Const("neg", fun_ty(INTEGER, INTEGER)), result)
    for negative, piece in terms[1:]:
        op = Const("-" if negative else "+", _INT_BIN)
        result = mk_binop(op, result, piece)
    return result


# ---------------------------------------------------------------------------
# Translation to z3
# ---------------------------------------------------------------------------


_COMPARISONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


class _Z3Translator:
    """Translate a boolean term to z3, abstracting non-arithmetic atoms."""

    def __init__(self):
        self.atoms: Dict[str, z3.ExprRef] = {}
        self.bound: Dict[Var, z3.ExprRef] = {}
        self._fresh = 0

    def _atom(self, t: Term, sort: str) -> z3.ExprRef:
        if any(v in self.bound for v in frees(t)):
            raise ArithError(f"outside linear fragment: {print_term(t)} depends on a bound variable")
        key = f"{sort}:{print_term(t)}"
        if key not in self.atoms:
            self.atoms[key] = z3.Int(key) if sort == "int" else z3.Bool(key)
        return self.atoms[key]

    def integer(self, t: Term) -> z3.ArithRef:
        value = dest_int(t)
        if value is not None:
            return z3.IntVal(value)
        if isinstance(t, Var):
            if t in self.bound:
                return self.bound[t]
            return z3.Int(t.name)
        head, args = strip_app(t)
        name = head.name if isinstance(head, Const) else None
        if name == "neg" and len(args) == 1:
            return -self.integer(args[0])
        if name in ("+", "-") and len(args) == 2:
            left, right = self.integer(args[0]), self.integer(args[1])
            return left + right if name == "+" else left - right
        if name == "*" and len(args) == 2:
            k_left = _constant(_Normalizer().poly(args[0]))
            k_right = _constant(_Normalizer().poly(args[1]))
            if k_left is None and k_right is None:
                raise ArithError(f"outside linear fragment: {print_term(t)}")
            if k_left is not None:
                return k_left * self.integer(args[1])
            return self.integer(args[0]) * k_right
        if name in ("/", "%") and len(args) == 2:
            k = _constant(_Normalizer().poly(args[1]))
            if k is None or k == 0:
                raise ArithError(f"outside linear fragment: {print_term(t)}")
            num = self.integer(args[0])
            quotient = _c_division(num, k)
            return quotient if name == "/" else num - k * quotient
        if name in ("sizeof", "EXP"):
            constant = _constant(_Normalizer().poly(t))
            if constant is not None:
                return z3.IntVal(constant)
        if name == "EXP" and len(args) == 2:
            if _constant(_Normalizer().poly(args[1])) == 1:
                return self.integer(args[0])
            raise ArithError(f"outside linear fragment: {print_term(t)}")
        return self._atom(t, "int")

    def boolean(self, t: Term) -> z3.BoolRef:
        if isinstance(t, Var):
            if t in self.bound:
                return self.bound[t]
            return z3.Bool(t.name)
        if isinstance(t, Const):
            if t.name == "T":
                return z3.BoolVal(True)
            if t.name == "F":
                return z3.BoolVal(False)
            return self._atom(t, "bool")
        head, args = strip_app(t)
        name = head.name if isinstance(head, Const) else None
        if name == "~" and len(args) == 1:
            return z3.Not(self.boolean(args[0]))
        if name in ("&&", "||", "==>") and len(args) == 2:
            left, right = self.boolean(args[0]), self.boolean(args[1])
            if name == "&&":
                return z3.And(left, right)
            if name == "||":
                return z3.Or(left, right)
            return z3.Implies(left, right)
        if name == "=" and len(args) == 2:
            if args[0].ty == INTEGER:
                return self.integer(args[0]) == self.integer(args[1])
            if args[0].ty == BOOL:
                return self.boolean(args[0]) == self.boolean(args[1])
            return self._atom(t, "bool")
        if name in _COMPARISONS and len(args) == 2:
            return _COMPARISONS[name](self.integer(args[0]), self.integer(args[1]))
        if name in ("!", "?") and len(args) == 1 and isinstance(args[0], Abs):
            return self._quantifier(name, args[0])
        return self._atom(t, "bool")

    def _quantifier(self, name: str, abs_term: Abs) -> z3.BoolRef:
        v = abs_term.bvar
        self._fresh += 1
        if v.ty == INTEGER:
            z3var = z3.Int(f"{v.name}!{self._fresh}")
        elif v.ty == BOOL:
            z3var = z3.Bool(f"{v.name}!{self._fresh}")
        else:
            raise ArithError(f"outside linear fragment: quantifier over {v.name}")
        saved = self.bound.get(v)
        self.bound[v] = z3var
        try:
            body = self.boolean(abs_term.body)
        finally:
            if saved is None:
                del self.bound[v]
            else:
                self.bound[v] = saved
        return z3.ForAll([z3var], body) if name == "!" else z3.Exists([z3var], body)


def _c_division(num: z3.ArithRef, k: int) -> z3.ArithRef:
    """Division truncating toward zero, by a non-zero literal."""
    magnitude = abs(k)
    toward_zero = z3.If(num >= 0, num / magnitude, -((-num) / magnitude))
    return toward_zero if k > 0 else -toward_zero


# ---------------------------------------------------------------------------
# The oracle
# ---------------------------------------------------------------------------


class ArithOracle:
    """Decides linear integer arithmetic and mints tagged theorems."""

    def __init__(
        self,
        registry: Registry,
        cache_enabled: bool = False,
        cache_dir: str = DEFAULT_CACHE_DIR,
        timeout_ms: int = ARITH_TIMEOUT_MS,
    ):
        """Initialize the oracle.

        Args:
            registry (Registry): Registry the oracle mints theorems in
            cache_enabled (bool): Whether to cache verdicts on disk
            cache_dir (str): Directory to store the cache
            timeout_ms (int): Solver timeout per query
        """
        self.registry = registry
        self.timeout_ms = timeout_ms
        self._mint = registry.oracles.get(ARITH_TAG) or registry.new_oracle(ARITH_TAG)
        self.cache_enabled = cache_enabled
        self.cache = None
        if self.cache_enabled:
            os.makedirs(cache_dir, exist_ok=True)
            self.cache = diskcache.Cache(cache_dir)
            logger.info(f"arith verdict caching enabled. Cache directory: {cache_dir}")
        self.queries = 0

    def _verdict(self, formula: Term) -> Tuple[bool, Optional[str]]:
        text = print_term(formula)
        cache_key = None
        if self.cache is not None:
            cache_key = hashlib.sha256(text.encode("utf-8")).hexdigest()
            cached = self.cache.get(cache_key)
            if cached is not None:
                logger.debug(f"Cache hit for key: {cache_key[:8]}...")
                return cached["valid"], cached["model"]
        translated = _Z3Translator().boolean(formula)
        solver = z3.Solver()
        solver.set("timeout", self.timeout_ms)
        solver.add(z3.Not(translated))
        self.queries += 1
        result = solver.check()
        if result == z3.unknown:
            raise ArithError(f"arithmetic oracle gave up on {text}")
        valid = result == z3.unsat
        model = None if valid else str(solver.model())
        if cache_key is not None:
            self.cache.set(cache_key, {"valid": valid, "model": model})
        return valid, model

    def is_valid(self, formula: Term) -> bool:
        """Validity of formula; False for formulas outside the fragment."""
        try:
            return self._verdict(formula)[0]
        except ArithError:
            return False

    def prove(self, formula: Term) -> Theorem:
        """|- formula, for a valid linear integer formula.

        Raises:
            ArithError: If the formula is outside the linear fragment or invalid
        """
        if formula.ty != BOOL:
            raise ArithError("arith expects a proposition")
        valid, model = self._verdict(formula)
        if not valid:
            raise ArithError(f"not valid: {print_term(formula)}", countermodel=model)
        logger.debug(f"arith proved {print_term(formula)}")
        return self._mint(formula)

    def prove_equal(self, a: Term, b: Term) -> Theorem:
        """|- a = b when both sides have the same polynomial normal form."""
        if not arith_equal(a, b):
            raise ArithError(f"not valid: {print_term(a)} == {print_term(b)}")
        return self._mint(mk_eq(a, b))

    def close(self) -> None:
        if self.cache is not None:
            self.cache.close()


_ORACLES: "weakref.WeakKeyDictionary[Registry, ArithOracle]" = weakref.WeakKeyDictionary()


def configure_oracle(registry: Registry, **options) -> ArithOracle:
    """Create (or replace) the arithmetic oracle attached to registry."""
    oracle = ArithOracle(registry, **options)
    _ORACLES[registry] = oracle
    return oracle


def get_oracle(registry: Registry) -> ArithOracle:
    oracle = _ORACLES.get(registry)
    if oracle is None:
        oracle = configure_oracle(registry)
    return oracle


def arith_rule(registry: Registry, formula: Term) -> Theorem:
    return get_oracle(registry).prove(formula)
