"""Models and the denotation of formulas.

A model fixes a nonempty value set, a semitopology and, for each predicate
symbol, a truth value at every (point, value) pair.  Denotations are
computed for all points at once; modal subformulas give the same value at
every point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .kernel3 import BinaryConn, TruthValue, apply_binary, fold_and, fold_or, from_bool
from .semitopo import Semitopology, SpatialModality, eval_modality_vec
from .syntax import (
    And, Bot, Contraquorum, Correctness, Eq, Everywhere, Exists, ExistsAffine,
    ExistsUnique, Forall, Formula, Iff, ModB, ModF, ModT, ModTB, ModTF, Neg, Or,
    Pred, Quorum, Somewhere, StrongImp, Term, Val, WeakImp, Xor,
    correctness_formula, free_vars, predicates, substitute, value_ids,
)

F, B, T = TruthValue.F, TruthValue.B, TruthValue.T

Interpretation = Mapping[str, Mapping[str, Mapping[str, TruthValue]]]


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Model:
    values: tuple[str, ...]
    space: Semitopology
    interp: Interpretation
    # pred -> value -> truth values in point order
    vectors: Mapping[str, Mapping[str, tuple[TruthValue, ...]]] = field(init=False, repr=False)

    def __post_init__(self):
        values = tuple(self.values)
        if not values:
            raise ValueError("a model needs at least one value")
        if len(set(values)) != len(values):
            raise ValueError(f"duplicate values in {values}")
        object.__setattr__(self, "values", values)
        vectors = {}
        for pred, table in self.interp.items():
            per_value = {}
            for v in values:
                try:
                    per_value[v] = tuple(TruthValue(table[p][v]) for p in self.space.points)
                except KeyError as exc:
                    raise ValueError(f"interpretation of {pred} is undefined at {exc.args[0]}") from None
            vectors[pred] = per_value
        object.__setattr__(self, "vectors", vectors)

    @property
    def predicates(self) -> frozenset[str]:
        return frozenset(self.interp)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (self.values == other.values and self.space == other.space
                and self.vectors == other.vectors)

    def __hash__(self):
        table = tuple(sorted((pred, tuple(per.items())) for pred, per in self.vectors.items()))
        return hash((self.values, self.space, table))

    @classmethod
    def build(cls, values: Sequence[str], space: Semitopology, preds: Iterable[str],
              fn: Callable[[str, str, str], TruthValue]) -> "Model":
        """Tabulate ``fn(pred, point, value)`` over every slot."""
        interp = {
            pred: {p: {v: fn(pred, p, v) for v in values} for p in space.points}
            for pred in preds
        }
        return cls(tuple(values), space, interp)

    @classmethod
    def from_partial(cls, values: Sequence[str], space: Semitopology, preds: Iterable[str],
                     entries: Mapping[str, Mapping[str, Mapping[str, TruthValue]]],
                     default: TruthValue = F) -> "Model":
        """Missing (pred, point, value) entries take ``default``."""
        def lookup(pred, p, v):
            return entries.get(pred, {}).get(p, {}).get(v, default)
        return cls.build(values, space, preds, lookup)

    def with_entries(self, updates: Mapping[tuple[str, str, str], TruthValue]) -> "Model":
        def lookup(pred, p, v):
            return updates.get((pred, p, v), self.interp[pred][p][v])
        return Model.build(self.values, self.space, sorted(self.interp), lookup)


_NEG = (T, B, F)
_MOD = {
    ModTF: (T, F, T),
    ModT: (F, F, T),
    ModB: (F, T, F),
    ModF: (T, F, F),
    ModTB: (F, T, T),
}
_SPATIAL = {
    Quorum: SpatialModality.QUORUM,
    Contraquorum: SpatialModality.CONTRAQUORUM,
    Everywhere: SpatialModality.EVERYWHERE,
    Somewhere: SpatialModality.SOMEWHERE,
}
_BINARY = {
    Or: BinaryConn.OR,
    Xor: BinaryConn.XOR,
    WeakImp: BinaryConn.WEAK_IMP,
    StrongImp: BinaryConn.STRONG_IMP,
    Iff: BinaryConn.IFF,
}


class _Evaluator:
    def __init__(self, model: Model):
        self.m = model
        self.n = len(model.space.points)

    def resolve(self, t: Term, env: Mapping[str, str]) -> str:
        if isinstance(t, Val):
            if t.name not in self.m.values:
                raise EvaluationError(f"unknown value '{t.name}")
            return t.name
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"free variable {t.name}") from None

    def vec(self, phi: Formula, env: Mapping[str, str]) -> tuple[TruthValue, ...]:
        kind = type(phi)
        if kind is Pred:
            try:
                table = self.m.vectors[phi.pred]
            except KeyError:
                raise EvaluationError(f"unknown predicate {phi.pred}") from None
            return table[self.resolve(phi.term, env)]
        if kind is Neg:
            return tuple(_NEG[x] for x in self.vec(phi.body, env))
        if kind is And:
            return tuple(map(min, self.vec(phi.left, env), self.vec(phi.right, env)))
        if kind in _MOD:
            table = _MOD[kind]
            return tuple(table[x] for x in self.vec(phi.body, env))
        if kind in _SPATIAL:
            value = eval_modality_vec(self.m.space, _SPATIAL[kind], self.vec(phi.body, env))
            return (value,) * self.n
        if kind in _BINARY:
            conn = _BINARY[kind]
            left, right = self.vec(phi.left, env), self.vec(phi.right, env)
            return tuple(apply_binary(conn, a, b) for a, b in zip(left, right))
        if kind is Eq:
            same = self.resolve(phi.left, env) == self.resolve(phi.right, env)
            return (from_bool(same),) * self.n
        if kind is Bot:
            return (F,) * self.n
        if kind is Exists or kind is Forall or kind is ExistsAffine or kind is ExistsUnique:
            per_value = [self.vec(phi.body, {**env, phi.var: v}) for v in self.m.values]
            points = range(self.n)
            if kind is Exists:
                return tuple(fold_or(f[p] for f in per_value) for p in points)
            if kind is Forall:
                return tuple(fold_and(f[p] for f in per_value) for p in points)
            affine = tuple(self._affine([f[p] for f in per_value]) for p in points)
            if kind is ExistsAffine:
                return affine
            some = tuple(fold_or(f[p] for f in per_value) for p in points)
            return tuple(map(min, some, affine))
        if isinstance(phi, Correctness):
            return self.vec(correctness_formula(phi), env)
        raise TypeError(f"unknown formula node {phi!r}")

    def _affine(self, column: Sequence[TruthValue]) -> TruthValue:
        # meet over ordered pairs (v, v') of (f v & f v') -o (v = v')
        values = self.m.values
        return fold_and(
            apply_binary(BinaryConn.WEAK_IMP, min(column[i], column[j]), from_bool(values[i] == values[j]))
            for i in range(len(values))
            for j in range(len(values))
        )


def _check_closed(m: Model, phi: Formula) -> None:
    free = free_vars(phi)
    if free:
        raise EvaluationError(f"formula has free variables: {', '.join(sorted(free))}")
    missing = predicates(phi) - m.predicates
    if missing:
        raise EvaluationError(f"unknown predicate {', '.join(sorted(missing))}")
    unknown = value_ids(phi) - set(m.values)
    if unknown:
        raise EvaluationError(f"unknown value {', '.join(sorted(unknown))}")


def denote_vector(m: Model, phi: Formula) -> tuple[TruthValue, ...]:
    """Denotation of a closed formula at every point, in point order."""
    _check_closed(m, phi)
    return _Evaluator(m).vec(phi, {})


def denote_all(m: Model, phi: Formula) -> dict[str, TruthValue]:
    return dict(zip(m.space.points, denote_vector(m, phi)))


def denote(m: Model, phi: Formula, p: str) -> TruthValue:
    if p not in m.space.index:
        raise EvaluationError(f"unknown point {p}")
    return denote_vector(m, phi)[m.space.index[p]]


def holds_at(m: Model, phi: Formula, p: str) -> bool:
    return denote(m, phi, p) != F


def is_valid_in_model(m: Model, phi: Formula) -> bool:
    return F not in denote_vector(m, phi)


def closure_bindings(m: Model, phi: Formula,
                     domains: Mapping[str, Sequence[str]] | None = None
                     ) -> list[tuple[dict[str, str], Formula]]:
    """Every instance of ``phi`` with its free variables replaced by values.

    Variables are bound in sorted order, each ranging over its domain (all of
    ``m.values`` by default).
    """
    domains = dict(domains or {})
    names = sorted(free_vars(phi))
    ranges = []
    for name in names:
        dom = tuple(domains.get(name, m.values))
        bad = [v for v in dom if v not in m.values]
        if bad:
            raise ValueError(f"domain of {name} mentions unknown values {bad}")
        ranges.append(dom)
    out = []
    for combo in itertools.product(*ranges):
        inst = phi
        for name, value in zip(names, combo):
            inst = substitute(inst, name, value)
        out.append((dict(zip(names, combo)), inst))
    return out


def universal_closure_instances(m: Model, phi: Formula,
                                domains: Mapping[str, Sequence[str]] | None = None) -> list[Formula]:
    return [inst for _, inst in closure_bindings(m, phi, domains)]
