"""
CStar - Trivial Entailment

The engine's automation: an entailment between symbolic heaps is discharged
without a verification condition when the right side's spatial conjuncts are
a reordering of the left side's (syntactic equality up to alpha conversion
and arithmetic normal form, with the right side's existentials matched), and
every pure goal follows from the left side's facts by linear arithmetic.
Anything else becomes a verification condition.
"""

import logging
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from cstar.kernel.terms import (
    FALSE,
    TRUE,
    Term,
    Var,
    alpha_eq,
    alpha_member,
    frees,
    mk_conj,
    mk_imp,
)
from cstar.seplogic.arith import ArithOracle
from cstar.seplogic.matching import Match, instantiate, match_term
from cstar.symexec.symheap import SymHeap, canonicalize, strip_binders
from cstar.utils.constants import MAX_MATCH_ATTEMPTS

logger = logging.getLogger(__name__)


def conjoin(pures: Sequence[Term]) -> Term:
    if not pures:
        return TRUE
    result = pures[-1]
    for p in reversed(pures[:-1]):
        result = mk_conj(p, result)
    return result


def pures_imply(oracle: ArithOracle, pures: Sequence[Term], goal: Term) -> bool:
    if alpha_eq(goal, TRUE) or alpha_member(goal, pures):
        return True
    if not pures:
        return oracle.is_valid(goal)
    return oracle.is_valid(mk_imp(conjoin(pures), goal))


def contradictory(oracle: ArithOracle, pures: Sequence[Term]) -> bool:
    return bool(pures) and oracle.is_valid(mk_imp(conjoin(pures), FALSE))


def match_conjuncts(
    patterns: Sequence[Term],
    targets: Sequence[Term],
    holes: Sequence[Var],
    match: Optional[Match] = None,
    exact: bool = True,
) -> Iterator[Tuple[Match, List[int]]]:
    """Assign each pattern conjunct a distinct target conjunct.

    Args:
        patterns (list): Conjuncts that may contain holes
        targets (list): Conjuncts to consume
        holes (list): Variables of the patterns that may be instantiated
        match (tuple, optional): Bindings found so far
        exact (bool): Whether every target must be consumed

    Yields:
        tuple: (bindings, index of the target chosen for each pattern)
    """
    attempts = [0]
    start: Match = match or ({}, {})

    def search(i: int, current: Match, used: List[int]) -> Iterator[Tuple[Match, List[int]]]:
        if i == len(patterns):
            if not exact or len(used) == len(targets):
                yield current, list(used)
            return
        for j, target in enumerate(targets):
            if j in used:
                continue
            attempts[0] += 1
            if attempts[0] > MAX_MATCH_ATTEMPTS:
                return
            found = match_term(patterns[i], target, holes, current[0], current[1], arith=True)
            if found is not None:
                used.append(j)
                yield from search(i + 1, found, used)
                used.pop()

    if exact and len(patterns) != len(targets):
        return
    yield from search(0, start, [])


def trivially_entails(oracle: ArithOracle, lhs: SymHeap, rhs: Term) -> bool:
    """Whether lhs |-- rhs holds by reordering plus linear arithmetic."""
    if alpha_eq(lhs.to_term(), rhs):
        return True
    goal = canonicalize(rhs, lhs.names())
    left, _ = strip_binders(lhs, {v.name for v in goal.free_vars()} | {v.name for v in goal.binders})
    if contradictory(oracle, left.pures):
        logger.debug("entailment discharged: contradictory facts")
        return True
    holes = list(goal.binders)
    for match, _ in match_conjuncts(goal.spatials, left.spatials, holes):
        pending = [instantiate(p, match) for p in goal.pures]
        unresolved = set(holes) - set(match[0])
        if any(_mentions(p, unresolved) for p in pending):
            continue
        if all(pures_imply(oracle, left.pures, p) for p in pending):
            return True
    return False


def _mentions(t: Term, variables: Set[Var]) -> bool:
    return bool(variables & set(frees(t)))
