"""Formula syntax: terms, the core constructors, and derived connectives.

The core language is ``Bot``, ``Neg``, ``And``, ``Quorum``, ``Everywhere``,
``Exists``, ``ExistsAffine``, ``ModTF``, ``Pred`` and ``Eq``.  Everything
else is sugar and :func:`desugar` rewrites it away.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Val:
    name: str


Term = Union[Var, Val]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from .grammar import to_text

        return to_text(self)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Pred(Formula):
    pred: str
    term: Term


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Unary(Formula):
    body: Formula


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Quantifier(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Correctness(Formula):
    preds: tuple[str, ...]

    def __post_init__(self):
        if not self.preds:
            raise ValueError(f"{type(self).__name__} needs at least one predicate")


# connectives on truth values
class Neg(Unary): pass
class ModT(Unary): pass
class ModB(Unary): pass
class ModF(Unary): pass
class ModTB(Unary): pass
class ModTF(Unary): pass


# spatial modalities
class Quorum(Unary): pass
class Contraquorum(Unary): pass
class Everywhere(Unary): pass
class Somewhere(Unary): pass


class And(Binary): pass
class Or(Binary): pass
class Xor(Binary): pass
class WeakImp(Binary): pass
class StrongImp(Binary): pass
class Iff(Binary): pass


class Exists(Quantifier): pass
class ExistsAffine(Quantifier): pass
class ExistsUnique(Quantifier): pass
class Forall(Quantifier): pass


class Correct(Correctness): pass
class Incorrect(Correctness): pass


CORE_TYPES = (Bot, Neg, And, Quorum, Everywhere, Exists, ExistsAffine, ModTF, Pred, Eq)


def map_children(phi: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    if isinstance(phi, Unary):
        return type(phi)(fn(phi.body))
    if isinstance(phi, Binary):
        return type(phi)(fn(phi.left), fn(phi.right))
    if isinstance(phi, Quantifier):
        return type(phi)(phi.var, fn(phi.body))
    return phi


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Unary):
        return (phi.body,)
    if isinstance(phi, Binary):
        return (phi.left, phi.right)
    if isinstance(phi, Quantifier):
        return (phi.body,)
    return ()


def _subst_term(t: Term, var: str, value: str) -> Term:
    return Val(value) if isinstance(t, Var) and t.name == var else t


def substitute(phi: Formula, var: str, value: str) -> Formula:
    """Replace every free occurrence of ``var`` by the value ``value``."""
    if isinstance(phi, Pred):
        return Pred(phi.pred, _subst_term(phi.term, var, value))
    if isinstance(phi, Eq):
        return Eq(_subst_term(phi.left, var, value), _subst_term(phi.right, var, value))
    if isinstance(phi, Quantifier) and phi.var == var:
        return phi
    return map_children(phi, lambda sub: substitute(sub, var, value))


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Pred):
        return frozenset([phi.term.name]) if isinstance(phi.term, Var) else frozenset()
    if isinstance(phi, Eq):
        return frozenset(t.name for t in (phi.left, phi.right) if isinstance(t, Var))
    if isinstance(phi, Quantifier):
        return free_vars(phi.body) - {phi.var}
    out: frozenset[str] = frozenset()
    for sub in children(phi):
        out |= free_vars(sub)
    return out


def predicates(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Pred):
        return frozenset([phi.pred])
    if isinstance(phi, Correctness):
        return frozenset(phi.preds)
    out: frozenset[str] = frozenset()
    for sub in children(phi):
        out |= predicates(sub)
    return out


def value_ids(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Pred):
        return frozenset([phi.term.name]) if isinstance(phi.term, Val) else frozenset()
    if isinstance(phi, Eq):
        return frozenset(t.name for t in (phi.left, phi.right) if isinstance(t, Val))
    out: frozenset[str] = frozenset()
    for sub in children(phi):
        out |= value_ids(sub)
    return out


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


CORRECTNESS_VAR = "a"


def correctness_formula(node: Correctness) -> Formula:
    """``correct{P}`` is ``forall a. %TF P(a)``; ``incorrect{P}`` uses ``%B``."""
    wrap = ModTF if isinstance(node, Correct) else ModB
    return conj(*(Forall(CORRECTNESS_VAR, wrap(Pred(p, Var(CORRECTNESS_VAR)))) for p in node.preds))


def _mod_t(phi: Formula) -> Formula:
    return And(ModTF(phi), phi)


def _or(a: Formula, b: Formula) -> Formula:
    return Neg(And(Neg(a), Neg(b)))


def _mod_b(phi: Formula) -> Formula:
    return Neg(ModTF(phi))


def desugar(phi: Formula) -> Formula:
    """Rewrite ``phi`` into the core constructors only."""
    if isinstance(phi, (Bot, Pred, Eq)):
        return phi
    if isinstance(phi, Correctness):
        return desugar(correctness_formula(phi))
    if isinstance(phi, (Neg, ModTF, Quorum, Everywhere, And, Exists, ExistsAffine)):
        return map_children(phi, desugar)
    if isinstance(phi, Unary):
        x = desugar(phi.body)
        if isinstance(phi, ModT):
            return _mod_t(x)
        if isinstance(phi, ModB):
            return _mod_b(x)
        if isinstance(phi, ModF):
            return _mod_t(Neg(x))
        if isinstance(phi, ModTB):
            return Neg(_mod_t(Neg(x)))
        if isinstance(phi, Contraquorum):
            return Neg(Quorum(Neg(x)))
        if isinstance(phi, Somewhere):
            return Neg(Everywhere(Neg(x)))
    if isinstance(phi, Binary):
        a, b = desugar(phi.left), desugar(phi.right)
        if isinstance(phi, Or):
            return _or(a, b)
        if isinstance(phi, WeakImp):
            return _or(Neg(a), b)
        if isinstance(phi, StrongImp):
            return _or(Neg(a), _mod_t(b))
        if isinstance(phi, Xor):
            return _or(And(a, Neg(b)), And(Neg(a), b))
        if isinstance(phi, Iff):
            same_t = And(_mod_t(a), _mod_t(b))
            same_b = And(_mod_b(a), _mod_b(b))
            same_f = And(_mod_t(Neg(a)), _mod_t(Neg(b)))
            return _or(_or(same_t, same_b), same_f)
    if isinstance(phi, Quantifier):
        body = desugar(phi.body)
        if isinstance(phi, Forall):
            return Neg(Exists(phi.var, Neg(body)))
        if isinstance(phi, ExistsUnique):
            return And(ExistsAffine(phi.var, body), Exists(phi.var, body))
    raise TypeError(f"unknown formula node {phi!r}")


def is_core(phi: Formula) -> bool:
    return isinstance(phi, CORE_TYPES) and all(is_core(c) for c in children(phi))
