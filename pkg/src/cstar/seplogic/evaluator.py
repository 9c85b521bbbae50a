"""
CStar - Concrete Heap Evaluator

A brute-force semantic oracle for heap propositions over a byte-level memory
model: a heap is a finite map from non-negative addresses to bytes.

Terms are evaluated to Python values. Heap propositions get one of two
representations:

    * a predicate on heaps, used by eval_hprop on an arbitrary given heap;
    * the set of satisfying heaps inside a bounded universe, used for
      entailment checks and for validating axioms, where `|--` is inclusion.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from cstar.errors import SemanticsError
from cstar.kernel.registry import Registry
from cstar.kernel.terms import Abs, App, Const, Term, Var, dest_addr, dest_eq, frees, is_numeral_name
from cstar.kernel.types import BOOL, CTYPE, HPROP, INTEGER, HolType, TyApp, TyVar, dest_fun, is_fun
from cstar.quote.env import SyntaxEnv
from cstar.quote.parser import parse_term
from cstar.seplogic.ctypes_info import CTYPES, ctype_info

logger = logging.getLogger(__name__)

Heap = FrozenSet[Tuple[int, int]]

EMPTY_HEAP: Heap = frozenset()


def make_heap(cells: Mapping[int, int]) -> Heap:
    for addr, byte in cells.items():
        if addr < 0 or not 0 <= byte <= 255:
            raise SemanticsError(f"invalid heap cell {addr} -> {byte}")
    return frozenset(cells.items())


@dataclass(frozen=True)
class Bounds:
    """Enumeration limits of the semantic oracle."""

    max_cells: int = 3
    addresses: Tuple[int, ...] = tuple(range(8))
    byte_values: Tuple[int, ...] = tuple(range(4))
    ints: Tuple[int, ...] = tuple(range(-1, 8))
    max_list_len: int = 3
    hprop_atoms: Tuple[str, ...] = (
        "emp",
        "pure(T)",
        "data_at(&0, Tchar, &1)",
        "undef_data_at(&1, Tchar)",
    )
    hprop_functions: Tuple[str, ...] = (
        "\\(x:integer). emp",
        "\\(x:integer). data_at(&0, Tchar, x)",
        "\\(x:integer). fact(x > &0)",
        "\\(x:integer). undef_data_at(x, Tchar)",
    )
    symbols: Mapping[str, int] = field(default_factory=dict)

    def universe(self) -> List[Heap]:
        heaps: List[Heap] = []
        for size in range(self.max_cells + 1):
            for addrs in itertools.combinations(self.addresses, size):
                for data in itertools.product(self.byte_values, repeat=size):
                    heaps.append(frozenset(zip(addrs, data)))
        return heaps


DEFAULT_BOUNDS = Bounds()


def _splits(heap: Heap) -> Iterable[Tuple[Heap, Heap]]:
    cells = sorted(heap)
    for size in range(len(cells) + 1):
        for part in itertools.combinations(cells, size):
            left = frozenset(part)
            yield left, heap - left


def _cells(addr: int, data: Tuple[int, ...]) -> Optional[Heap]:
    if addr < 0:
        return None
    return frozenset((addr + i, b) for i, b in enumerate(data))


# ---------------------------------------------------------------------------
# Heap proposition algebras
# ---------------------------------------------------------------------------


class PredicateAlgebra:
    """Heap propositions as predicates over arbitrary heaps."""

    def __init__(self, bounds: Bounds):
        self.bounds = bounds

    def emp(self):
        return lambda h: not h

    def pure(self, p: bool):
        return lambda h: p

    def hand(self, a, b):
        return lambda h: a(h) and b(h)

    def sep(self, a, b):
        return lambda h: any(a(left) and b(right) for left, right in _splits(h))

    def data_at(self, addr: int, ty: str, value: int):
        info = ctype_info(ty)
        if not info.valid(value):
            return lambda h: False
        expected = _cells(addr, info.encode(value))
        return lambda h: h == expected

    def undef_data_at(self, addr: int, ty: str):
        info = ctype_info(ty)
        wanted = set(range(addr, addr + info.size)) if addr >= 0 else None
        return lambda h: wanted is not None and {a for a, _ in h} == wanted and len(h) == len(wanted)

    def exists(self, options: List[Any]):
        return lambda h: any(opt(h) for opt in options)

    def entails(self, a, b) -> bool:
        return all(b(h) for h in self.bounds.universe() if a(h))

    def bientails(self, a, b) -> bool:
        return all(a(h) == b(h) for h in self.bounds.universe())


class SetAlgebra:
    """Heap propositions as sets of heaps within the bounded universe."""

    def __init__(self, bounds: Bounds):
        self.bounds = bounds
        self.universe = frozenset(bounds.universe())
        self._address_set = set(bounds.addresses)
        self._byte_set = set(bounds.byte_values)

    def _inside(self, heap: Optional[Heap]) -> bool:
        if heap is None or len(heap) > self.bounds.max_cells:
            return False
        return all(a in self._address_set and b in self._byte_set for a, b in heap)

    def emp(self):
        return frozenset([EMPTY_HEAP])

    def pure(self, p: bool):
        return self.universe if p else frozenset()

    def hand(self, a, b):
        return a & b

    def sep(self, a, b):
        if not a or not b:
            return frozenset()
        if len(a) * len(b) > len(self.universe) * (1 << self.bounds.max_cells):
            return frozenset(
                h for h in self.universe if any(l in a and r in b for l, r in _splits(h))
            )
        out = set()
        for left in a:
            used = {addr for addr, _ in left}
            for right in b:
                if len(left) + len(right) > self.bounds.max_cells:
                    continue
                if any(addr in used for addr, _ in right):
                    continue
                out.add(left | right)
        return frozenset(out)

    def data_at(self, addr: int, ty: str, value: int):
        info = ctype_info(ty)
        if not info.valid(value):
            return frozenset()
        heap = _cells(addr, info.encode(value))
        return frozenset([heap]) if self._inside(heap) else frozenset()

    def undef_data_at(self, addr: int, ty: str):
        info = ctype_info(ty)
        if addr < 0 or info.size > self.bounds.max_cells:
            return frozenset()
        out = []
        for data in itertools.product(self.bounds.byte_values, repeat=info.size):
            heap = _cells(addr, data)
            if self._inside(heap):
                out.append(heap)
        return frozenset(out)

    def exists(self, options: List[Any]):
        return reduce(lambda x, y: x | y, options, frozenset())

    def entails(self, a, b) -> bool:
        return a <= b

    def bientails(self, a, b) -> bool:
        return a == b


# ---------------------------------------------------------------------------
# Term evaluation
# ---------------------------------------------------------------------------


def _c_div(a: int, b: int) -> int:
    if b == 0:
        return 0
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _c_mod(a: int, b: int) -> int:
    if b == 0:
        return a
    return a - b * _c_div(a, b)


def _curry(fn: Callable, arity: int):
    def collect(args):
        if len(args) == arity:
            return fn(*args)
        return lambda x: collect(args + (x,))

    return collect(())


def _arith_functions(ty: HolType) -> List[Any]:
    """A small family of curried integer functions: zero, each projection, the sum."""
    arity, cod = 0, ty
    while is_fun(cod):
        arity, cod = arity + 1, dest_fun(cod)[1]
    if not (cod == INTEGER or isinstance(cod, TyVar)):
        raise SemanticsError(f"no enumeration bounds for values of type {ty}")
    family = [_curry(lambda *args: 0, arity), _curry(lambda *args: sum(args), arity)]
    for i in range(arity):
        family.append(_curry(lambda *args, i=i: args[i], arity))
    return family


class Evaluator:
    """Evaluates closed terms (or terms with bound environments) to values."""

    def __init__(self, registry: Registry, bounds: Bounds = DEFAULT_BOUNDS, algebra=None):
        self.registry = registry
        self.bounds = bounds
        self.algebra = algebra or SetAlgebra(bounds)
        self._definitions: Dict[str, Any] = {}
        self._domains: Dict[HolType, List[Any]] = {}
        self._builtins = self._make_builtins()

    # domains of quantified variables

    def domain(self, ty: HolType) -> List[Any]:
        if ty not in self._domains:
            self._domains[ty] = self._make_domain(ty)
        return self._domains[ty]

    def _make_domain(self, ty: HolType) -> List[Any]:
        if isinstance(ty, TyVar) or ty == INTEGER:
            return list(self.bounds.ints)
        if ty == BOOL:
            return [False, True]
        if ty == CTYPE:
            return list(CTYPES)
        if ty == HPROP:
            return [self._quoted(text) for text in self.bounds.hprop_atoms]
        if isinstance(ty, TyApp) and ty.name == "list":
            elems = self.domain(ty.args[0]) if ty.args[0] != INTEGER else list(self.bounds.byte_values)
            out: List[Any] = []
            for size in range(self.bounds.max_list_len + 1):
                out.extend(itertools.product(elems, repeat=size))
            return out
        if is_fun(ty) and dest_fun(ty)[1] == HPROP:
            return [self._quoted(text) for text in self.bounds.hprop_functions]
        if is_fun(ty):
            return _arith_functions(ty)
        raise SemanticsError(f"no enumeration bounds for values of type {ty}")

    def _quoted(self, text: str):
        return self.value(parse_term(text, SyntaxEnv(self.registry)), {})

    # builtins

    def _make_builtins(self) -> Dict[str, Any]:
        alg = self.algebra
        return {
            "T": True,
            "F": False,
            "~": lambda p: not p,
            "&&": _curry(lambda p, q: p and q, 2),
            "||": _curry(lambda p, q: p or q, 2),
            "==>": _curry(lambda p, q: (not p) or q, 2),
            "+": _curry(lambda a, b: a + b, 2),
            "-": _curry(lambda a, b: a - b, 2),
            "*": _curry(lambda a, b: a * b, 2),
            "/": _curry(_c_div, 2),
            "%": _curry(_c_mod, 2),
            "EXP": _curry(lambda a, b: a**b if b >= 0 else 0, 2),
            "neg": lambda a: -a,
            "<": _curry(lambda a, b: a < b, 2),
            "<=": _curry(lambda a, b: a <= b, 2),
            ">": _curry(lambda a, b: a > b, 2),
            ">=": _curry(lambda a, b: a >= b, 2),
            "emp": alg.emp(),
            "pure": alg.pure,
            "hand": _curry(alg.hand, 2),
            "**": _curry(alg.sep, 2),
            "|--": _curry(alg.entails, 2),
            "-|-": _curry(alg.bientails, 2),
            "data_at": _curry(alg.data_at, 3),
            "undef_data_at": _curry(alg.undef_data_at, 2),
            "array_at": _curry(self._array_at, 3),
            "undef_array_at": _curry(self._undef_array_at, 3),
            "malloc_at": _curry(self._malloc_at, 2),
            "nil": (),
            "cons": _curry(lambda x, l: (x,) + tuple(l), 2),
            "replicate": _curry(lambda n, v: (v,) * max(n, 0), 2),
            "fold_right": _curry(self._fold_right, 3),
            "sizeof": lambda ty: ctype_info(ty).size,
        }

    def _array_at(self, addr: int, ty: str, values) -> Any:
        alg, size = self.algebra, ctype_info(ty).size
        result = alg.emp()
        for i in reversed(range(len(values))):
            result = alg.sep(alg.data_at(addr + i * size, ty, values[i]), result)
        return result

    def _undef_array_at(self, addr: int, ty: str, n: int) -> Any:
        alg, size = self.algebra, ctype_info(ty).size
        if n < 0:
            return alg.pure(False)
        result = alg.emp()
        for i in reversed(range(n)):
            result = alg.sep(alg.undef_data_at(addr + i * size, ty), result)
        return result

    def _malloc_at(self, p: int, n: int) -> Any:
        if p == 0:
            return self.algebra.emp()
        return self._undef_array_at(p, "Tchar", n)

    @staticmethod
    def _fold_right(f, values, init):
        acc = init
        for x in reversed(values):
            acc = f(x)(acc)
        return acc

    # evaluation

    def value(self, t: Term, env: Dict[Var, Any]) -> Any:
        if isinstance(t, Var):
            if t not in env:
                raise SemanticsError(f"free variable {t.name} has no value")
            return env[t]
        if isinstance(t, Const):
            return self._const(t)
        if isinstance(t, Abs):
            bvar, body = t.bvar, t.body
            return lambda x: self.value(body, {**env, bvar: x})
        fn = t.fn
        if isinstance(fn, App) and isinstance(fn.fn, Const) and fn.fn.name == "=":
            return self._equal(fn.arg.ty, self.value(fn.arg, env), self.value(t.arg, env))
        return self.value(fn, env)(self.value(t.arg, env))

    def _equal(self, ty: HolType, a: Any, b: Any) -> bool:
        if ty == HPROP:
            return self.algebra.bientails(a, b)
        if is_fun(ty):
            return all(self._equal(dest_fun(ty)[1], a(x), b(x)) for x in self.domain(dest_fun(ty)[0]))
        return a == b

    def _const(self, c: Const) -> Any:
        name = c.name
        if is_numeral_name(name):
            return int(name)
        addr = dest_addr(c)
        if addr is not None:
            if addr not in self.bounds.symbols:
                raise SemanticsError(f"no concrete address for &\"{addr}\"")
            return self.bounds.symbols[addr]
        if name in CTYPES:
            return name
        if name in ("!", "?", "hexists"):
            domain = self.domain(dest_fun(dest_fun(c.ty)[0])[0])
            if name == "!":
                return lambda f: all(f(x) for x in domain)
            if name == "?":
                return lambda f: any(f(x) for x in domain)
            return lambda f: self.algebra.exists([f(x) for x in domain])
        if name == "=":
            ty = dest_fun(c.ty)[0]
            return _curry(lambda a, b: self._equal(ty, a, b), 2)
        if name in self._builtins:
            return self._builtins[name]
        if name in self.registry.definitions:
            if name not in self._definitions:
                _, body = dest_eq(self.registry.definitions[name].concl)
                self._definitions[name] = self.value(body, {})
            return self._definitions[name]
        raise SemanticsError(f"unknown predicate head {name}")


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def _assignments(evaluator: Evaluator, variables: Iterable[Var]) -> Iterable[Dict[Var, Any]]:
    ordered = sorted(variables, key=lambda v: v.name)
    domains = [evaluator.domain(v.ty) for v in ordered]
    for values in itertools.product(*domains):
        yield dict(zip(ordered, values))


def eval_hprop(
    t: Term,
    heap: Mapping[int, int],
    registry: Registry,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> bool:
    """Truth of a ground heap proposition on a concrete heap.

    Args:
        t (Term): Closed term of type hprop
        heap (dict): Address to byte mapping
        registry (Registry): Registry holding the separation-logic theory
        bounds (Bounds): Domains for existentials inside t

    Returns:
        bool: Whether heap satisfies t
    """
    if t.ty != HPROP:
        raise SemanticsError("eval_hprop expects a heap proposition")
    loose = frees(t)
    if loose:
        names = ", ".join(sorted(v.name for v in loose))
        raise SemanticsError(f"term is not ground: free variables {names}")
    evaluator = Evaluator(registry, bounds, PredicateAlgebra(bounds))
    return bool(evaluator.value(t, {})(make_heap(heap)))


def eval_bool(t: Term, registry: Registry, bounds: Bounds = DEFAULT_BOUNDS, env=None) -> bool:
    """Truth of a boolean term; quantifiers range over the bounded domains."""
    if t.ty != BOOL:
        raise SemanticsError("eval_bool expects a proposition")
    return bool(Evaluator(registry, bounds).value(t, dict(env or {})))


def denote(t: Term, registry: Registry, bounds: Bounds = DEFAULT_BOUNDS, env=None) -> FrozenSet[Heap]:
    """Set of heaps in the bounded universe satisfying t."""
    return Evaluator(registry, bounds).value(t, dict(env or {}))


def entails_semantically(
    lhs: Term, rhs: Term, registry: Registry, bounds: Bounds = DEFAULT_BOUNDS
) -> bool:
    """True iff every heap within bounds satisfying lhs satisfies rhs.

    Free variables of either side range over their bounded domains; the
    entailment must hold for every assignment.
    """
    evaluator = Evaluator(registry, bounds)
    for env in _assignments(evaluator, frees(lhs) | frees(rhs)):
        if not evaluator.value(lhs, env) <= evaluator.value(rhs, env):
            logger.debug(f"entailment fails under {env}")
            return False
    return True


def counterexamples(
    statement: Term, registry: Registry, bounds: Bounds = DEFAULT_BOUNDS, limit: int = 5
) -> List[Dict[str, Any]]:
    """Assignments to the free variables under which statement is false."""
    evaluator = Evaluator(registry, bounds)
    found: List[Dict[str, Any]] = []
    for env in _assignments(evaluator, frees(statement)):
        if not evaluator.value(statement, env):
            found.append({v.name: val for v, val in env.items()})
            if len(found) >= limit:
                break
    return found


def validate_axiom(registry: Registry, tag: str, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """Evaluate a registered axiom over the bounded domains."""
    statement = registry.axiom(tag).concl
    return bool(Evaluator(registry, bounds).value(statement, {}))
