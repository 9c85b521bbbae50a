"""
CStar - HOL Types

Simple types of the object logic: type variables and applications of type
constructors. Built-in constructors have fixed arities; user constructors are
checked by the registry.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Set, Tuple, Union

from cstar.errors import TermError

BUILTIN_TYPE_ARITIES = {
    "bool": 0,
    "fun": 2,
    "integer": 0,
    "hprop": 0,
    "ctype": 0,
    "list": 1,
}


@dataclass(frozen=True)
class TyVar:
    name: str

    def __str__(self) -> str:
        return type_to_string(self)


@dataclass(frozen=True)
class TyApp:
    name: str
    args: Tuple["HolType", ...] = ()

    def __post_init__(self):
        arity = BUILTIN_TYPE_ARITIES.get(self.name)
        if arity is not None and arity != len(self.args):
            raise TermError(
                f"type constructor {self.name} expects {arity} arguments, got {len(self.args)}"
            )

    def __str__(self) -> str:
        return type_to_string(self)


HolType = Union[TyVar, TyApp]

BOOL = TyApp("bool")
INTEGER = TyApp("integer")
HPROP = TyApp("hprop")
CTYPE = TyApp("ctype")


def fun_ty(dom: HolType, cod: HolType) -> TyApp:
    return TyApp("fun", (dom, cod))


def list_ty(elem: HolType) -> TyApp:
    return TyApp("list", (elem,))


INT_LIST = list_ty(INTEGER)


def fun_tys(params, result: HolType) -> HolType:
    """Build the curried function type params[0] -> ... -> result."""
    ty = result
    for param in reversed(list(params)):
        ty = fun_ty(param, ty)
    return ty


def is_fun(ty: HolType) -> bool:
    return isinstance(ty, TyApp) and ty.name == "fun"


def dest_fun(ty: HolType) -> Tuple[HolType, HolType]:
    if not is_fun(ty):
        raise TermError(f"expected a function type, got {type_to_string(ty)}")
    return ty.args[0], ty.args[1]


def type_vars(ty: HolType) -> Set[TyVar]:
    if isinstance(ty, TyVar):
        return {ty}
    found: Set[TyVar] = set()
    for arg in ty.args:
        found |= type_vars(arg)
    return found


def type_subst(theta: Dict[TyVar, HolType], ty: HolType) -> HolType:
    if not theta:
        return ty
    if isinstance(ty, TyVar):
        return theta.get(ty, ty)
    if not ty.args:
        return ty
    return TyApp(ty.name, tuple(type_subst(theta, arg) for arg in ty.args))


def type_match(
    pattern: HolType, target: HolType, theta: Optional[Dict[TyVar, HolType]] = None
) -> Optional[Dict[TyVar, HolType]]:
    """Match pattern against target, extending theta.

    Args:
        pattern (HolType): Type possibly containing type variables
        target (HolType): Type to match
        theta (dict, optional): Bindings found so far

    Returns:
        dict or None: Extended bindings, or None when the types do not match
    """
    theta = dict(theta or {})
    stack = [(pattern, target)]
    while stack:
        pat, tgt = stack.pop()
        if isinstance(pat, TyVar):
            bound = theta.get(pat)
            if bound is None:
                theta[pat] = tgt
            elif bound != tgt:
                return None
        elif isinstance(tgt, TyApp) and pat.name == tgt.name and len(pat.args) == len(tgt.args):
            stack.extend(zip(pat.args, tgt.args))
        else:
            return None
    return theta


def type_to_string(ty: HolType) -> str:
    if isinstance(ty, TyVar):
        return "'" + ty.name
    if ty.name == "fun":
        dom, cod = ty.args
        left = type_to_string(dom)
        if is_fun(dom):
            left = f"({left})"
        return f"{left} -> {type_to_string(cod)}"
    if ty.name == "list":
        if ty.args[0] == INTEGER:
            return "int_list"
        inner = type_to_string(ty.args[0])
        if isinstance(ty.args[0], TyApp) and ty.args[0].args:
            inner = f"({inner})"
        return f"list {inner}"
    if not ty.args:
        return ty.name
    inner = " ".join(
        f"({type_to_string(a)})" if isinstance(a, TyApp) and a.args else type_to_string(a)
        for a in ty.args
    )
    return f"{ty.name} {inner}"
